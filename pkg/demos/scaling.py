"""
Scaling to longer chains
========================

The axial confinement must shrink as ions are added to keep a linear
crystal, and the gates slow down accordingly.
"""

from ionforge.resources import plan

for n in (5, 10, 20, 50):
    p = plan(n)
    print(
        f"n={n:3d}  nu_z={p['nu_z']:.4f} MHz (max {p['nu_z_max']:.4f})"
        f"  tau_g={p['tau_g']:8.1f} us  pair solutions={p['calibrations']['xx_pulse_solutions']}"
    )
