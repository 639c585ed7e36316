"""
Deutsch-Jozsa and Bernstein-Vazirani
====================================

Both algorithms answer a question about a hidden function with a single
oracle query.
"""

from ionforge import NoiseModel
from ionforge.algorithms import BVOracle, DJOracle, all_dj_oracles, run_bv, run_dj

# exact mode: every oracle is classified correctly
for oracle in all_dj_oracles():
    res = run_dj(oracle)
    print(f"{oracle.label:14s} -> {res.verdict:8s} success={res.success_probability:.3f}")

# the Bernstein-Vazirani register returns the complement of the hidden string
res = run_bv(BVOracle("0110"))
print("c=0110 measured", res.measured, "with probability", round(res.p_correct, 6))

# with two-qubit gate errors the success probability drops
for p2 in (0.0, 0.02, 0.05):
    noisy = run_dj(DJOracle.parse("balanced:123"), noise=NoiseModel(p2=p2), shots=20_000, seed=1)
    print(f"p2={p2:.2f} success={noisy.success_probability:.3f}")
