"""
Readout error mitigation
========================

A detector confusion matrix blurs the measured distribution. Constrained
least squares recovers a valid probability vector.
"""

import numpy as np

from ionforge import Histogram, build_confusion, correct_readout, readout_standard_errors

gen = np.random.default_rng(7)
p_true = gen.dirichlet(np.ones(8))

# one (r01, r10) pair per qubit
confusion = build_confusion([(0.003, 0.009), (0.02, 0.01), (0.0, 0.05)], 3)
counts = gen.multinomial(100_000, confusion.apply(p_true))
hist = Histogram(3, counts, "counts", 100_000)

corrected = correct_readout(hist, confusion).entries
se = readout_standard_errors(hist, confusion)
print("raw error      ", np.abs(hist.frequencies() - p_true).max())
print("corrected error", np.abs(corrected - p_true).max())
print("z scores       ", np.round((corrected - p_true) / se, 2))
