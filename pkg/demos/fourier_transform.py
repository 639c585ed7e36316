"""
Quantum Fourier transform
=========================

Phase estimation and period finding on five qubits. The transform omits
the final swaps; outputs are read with reversed bit significance.
"""

import math

import numpy as np

from ionforge.algorithms import PERIOD_INPUTS, phase_sweep, run_period_finding, run_phase_estimation

# a phase that is a multiple of 2 pi / 32 lands on a single outcome
res = run_phase_estimation(2 * math.pi * 5 / 32)
print("peak", res.peak_index, "p", round(res.p_peak, 6))

# halfway between two grid points the weight splits over the neighbours
res = run_phase_estimation(2 * math.pi * 5.5 / 32)
print("neighbours", np.round(res.histogram.entries[5:7], 4))

# sweep phi over 64 points and report the peak
peaks = [r.peak_index for r in phase_sweep(64)]
print("peaks:", peaks)

# periodic inputs give equally spaced peaks; the period is their count
for period, row in PERIOD_INPUTS.items():
    res = run_period_finding(row)
    print(f"period {period:2d}: detected {res.detected_period}, sso {res.sso:.6f}")
