"""
Controlled-phase characterization
=================================

Control in |1>, target in |+>, a CP(theta) gate and a final pi/2 rotation
map the conditional phase onto the target population.
"""

import numpy as np

from ionforge import NoiseModel
from ionforge.algorithms import cp_characterization

thetas = np.linspace(-np.pi, np.pi, 9)
curve = cp_characterization((1, 2), thetas)
for t, p, ideal in zip(thetas, curve.populations, curve.ideal):
    print(f"theta={t:+.3f}  P(1)={p:.4f}  ideal={ideal:.4f}")

# sampled with crosstalk and readout errors
noisy = cp_characterization((1, 2), thetas, noise=NoiseModel(), shots=5000, seed=2)
print(np.round(noisy.populations - noisy.ideal, 3))
