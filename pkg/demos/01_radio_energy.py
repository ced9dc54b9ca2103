"""Radio energy model
=================

How much does one 4000-bit packet cost to send and receive, and how fast
does that grow with distance?
"""
import numpy as np

from dare import RadioParams, rx_energy, tx_energy

P = RadioParams()
print("circuitry  tx: %.3g J/bit   rx: %.3g J/bit" % (P.e_tx_elec, P.e_rx_elec))
print("amplifier  n=%.2f: %.3g J/bit/ft^n" % (P.default_n, P.amp(P.default_n)))

###############################################################################
# A body sensor sits about a foot from its relay; a relay may be 15+ ft
# from the sink. The amplifier term dominates quickly.

d = np.array([0.5, 1.0, 2.0, 5.0, 10.0, 15.8, 20.0])
e = tx_energy(P, 4000, d)
for di, ei in zip(d, e):
    print(f"d = {di:5.1f} ft   tx = {ei:.3e} J   rounds on 1 J: {1.0 / ei:8.0f}")
print(f"receive: {rx_energy(P, 4000):.3e} J per packet")

###############################################################################
# The steeper exponent is available but unused by default.

print("n = 5.9 at 10 ft:", tx_energy(P, 4000, 10.0, n=5.9))
