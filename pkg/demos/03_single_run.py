"""One run, round by round
=======================

Run scenario 3 and look at energy draining out of the network.
"""
import numpy as np

from dare import SimConfig, run

summary = run(SimConfig(scenario=3, rounds=2000, seed=7, record_events=True))
print("stability period:", summary.stability_period)
print("last death round:", summary.last_death_round)
print("lifetime:        ", summary.lifetime)
print("delivery ratio:   %.3f%%" % summary.throughput_pct)

alive = np.array([s.alive_bs_br for s in summary.series])
energy = np.array([s.residual_total_energy for s in summary.series])
for r in (1, 250, 500, 1000, 1500, 2000):
    print(f"round {r:5d}: {alive[r - 1]:2d} nodes alive, {energy[r - 1]:.4f} J left")

###############################################################################
# Every joule that left the network shows up in an energy report.

reported = sum(rep.total for rep in summary.events.energy)
print("spent %.9f J, reported %.9f J" % (summary.initial_energy - summary.final_energy, reported))
print("first deaths:", summary.events.deaths[:5])
