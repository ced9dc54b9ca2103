"""Ward scenarios and sink trajectories
====================================

The five deployments share one bed layout and differ in where data goes.
"""
from dare import build_scenario, distance, sink_positions

for sid in range(1, 6):
    sc = build_scenario(sid)
    print(f"scenario {sid}: {len(sc.beds)} beds, {len(sc.sinks)} sink(s), "
          f"routing={sc.routing.value}, nodes={sc.node_count}")

###############################################################################
# Distance from each relay to the sink it reports to, at round 0.

for sid in (1, 2, 3):
    sc = build_scenario(sid)
    sinks = sink_positions(sc, 0)
    ds = []
    for bed in sc.beds:
        br = sc.relay_position(bed)
        target = [sc.main_sensor_position(bed)] if sc.uses_main_sensor else sinks
        ds.append(min(distance(br, p) for p in target))
    print(f"scenario {sid}: relay hop lengths", " ".join(f"{x:.1f}" for x in ds))

###############################################################################
# Mobile sinks: scenario 4 sweeps the centre line, scenario 5 circles the walls.

s4, s5 = build_scenario(4), build_scenario(5)
for t in (0, 10, 20, 40, 60, 80):
    a = sink_positions(s4, t)[0]
    b = sink_positions(s5, t)
    print(f"t={t:3d}  s4 sink ({a.x:4.1f},{a.y:4.1f})   s5 sinks "
          + " ".join(f"({p.x:4.1f},{p.y:4.1f})" for p in b))
