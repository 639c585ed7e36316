"""
Compiling to native ion gates
=============================

Standard gates become sequences of R(theta, phi) rotations and XX(chi)
interactions. The result depends on the sign of each pair's Ising phase.
"""

import math

import numpy as np

from ionforge import Circuit, CNOT, CP, H, SignTable, compile_circuit, default_sign_table
from ionforge.circuit_io import native_listing
from ionforge.compiler import equivalent_up_to_global_phase, unitary_of

# a CNOT on ions 1 and 2, for both signs of the interaction
bell = Circuit(2, (H(1), CNOT(1, 2)))
for sign in (+1, -1):
    compiled = compile_circuit(bell, SignTable.uniform(2, sign))
    print(f"sign {sign:+d}:", compiled.counts())
    print(native_listing(compiled))

# the compiled unitary equals the ideal one up to a global phase
cp = Circuit(5, (CP(2, 5, math.pi / 8),))
native = compile_circuit(cp, default_sign_table(5))
print("CP(pi/8) on (2, 5) exact:", equivalent_up_to_global_phase(unitary_of(native.circuit), unitary_of(cp)))

# provenance maps each native gate back to the standard gate it came from
print(np.bincount(native.provenance))
