"""Lowering of standard logic gates to the native R/XX instruction set.

Two-qubit gates are compiled "modularly": every ion pair receives the same
sequence of gate kinds, and only rotation signs change with the pair's Ising
sign. The sign of each emitted ``XX`` angle always equals the pair's sign, so
the hardware never has to realize an interaction it cannot produce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, NotCompiledError, ResourceLimitError
from .gates import (
    CNOT,
    CP,
    H,
    R,
    XX,
    Circuit,
    Rx,
    Ry,
    Rz,
    default_sign_table,
)
from .statevector import apply_matrix

HALF_PI = math.pi / 2
UNITARY_MAX_QUBITS = 10
_PRUNE_TOL = 1e-12


def _ry(q, theta):
    return R(q, theta, HALF_PI)


def _rx(q, theta):
    return R(q, theta, 0.0)


def compile_h(q):
    """``H ≅ Rx(-pi) Ry(pi/2)``: Ry first, then Rx. Equal to ``i·H``."""
    return [_ry(q, HALF_PI), _rx(q, -math.pi)]


def compile_rx(q, theta):
    return [_rx(q, theta)]


def compile_ry(q, theta):
    return [_ry(q, theta)]


def compile_rz(q, theta):
    """``Rz(theta) = Ry(-pi/2) Rx(theta) Ry(pi/2)`` (exact, no phase)."""
    return [_ry(q, HALF_PI), _rx(q, theta), _ry(q, -HALF_PI)]


def compile_cnot(control, target, signs):
    """CNOT with one XX and four R gates.

    Uses ``CNOT ∝ Rz_c(pi/2) Rx_t(pi/2) exp(i pi/4 Z_c X_t)``. The Z_c X_t
    interaction is obtained from XX(alpha·pi/4) by an Ry(v·pi/2) basis change
    on the control with ``v = -alpha``; the trailing Rz on the control merges
    into the basis-change inverse.
    """
    if control == target:
        raise ArgumentError("CNOT control and target must differ")
    alpha = signs[(control, target)]
    v = -alpha
    return [
        _ry(control, v * HALF_PI),
        XX(control, target, alpha * math.pi / 4),
        _rx(control, v * HALF_PI),
        _ry(control, -v * HALF_PI),
        _rx(target, HALF_PI),
    ]


def compile_cp(control, target, beta, signs):
    """Controlled phase with one XX and six R gates.

    ``CP(beta) ∝ Rz_c(beta/2) Rz_t(beta/2) exp(i beta/4 Z_c Z_t)``. The ZZ term
    comes from XX(alpha·|beta|/4) conjugated by Ry(pi/2) on the control and
    Ry(v·pi/2) on the target, ``v = -alpha·sgn(beta)``; each Rz folds into the
    closing basis change as an Rx.
    """
    if control == target:
        raise ArgumentError("CP control and target must differ")
    if abs(beta) > math.pi + 1e-12:
        raise ArgumentError(f"CP angle must satisfy |beta| <= pi, got {beta!r}")
    alpha = signs[(control, target)]
    if beta == 0:
        return []
    v = -alpha * (1 if beta > 0 else -1)
    return [
        _ry(control, HALF_PI),
        _ry(target, v * HALF_PI),
        XX(control, target, alpha * abs(beta) / 4),
        _rx(control, beta / 2),
        _rx(target, v * beta / 2),
        _ry(control, -HALF_PI),
        _ry(target, -v * HALF_PI),
    ]


def compile_gate(gate, signs):
    if isinstance(gate, H):
        return compile_h(gate.q)
    if isinstance(gate, Rx):
        return compile_rx(gate.q, gate.theta)
    if isinstance(gate, Ry):
        return compile_ry(gate.q, gate.theta)
    if isinstance(gate, Rz):
        return compile_rz(gate.q, gate.theta)
    if isinstance(gate, CNOT):
        return compile_cnot(gate.control, gate.target, signs)
    if isinstance(gate, CP):
        return compile_cp(gate.control, gate.target, gate.beta, signs)
    if isinstance(gate, (R, XX)):
        return [gate]
    raise TypeError(f"cannot compile {gate!r}")


def prune_identities(seq):
    """Drop identity gates and cancel adjacent inverse R pairs on a qubit.

    Two R gates on the same qubit cancel when they share an axis, their angles
    sum to zero, and no gate touching that qubit sits between them.
    """
    seq = [
        g for g in seq
        if not ((isinstance(g, R) and abs(g.theta) < _PRUNE_TOL) or (isinstance(g, XX) and abs(g.chi) < _PRUNE_TOL))
    ]
    changed = True
    while changed:
        changed = False
        last = {}  # qubit -> position of most recent gate touching it
        for pos, g in enumerate(seq):
            if isinstance(g, R) and g.q in last:
                prev = seq[last[g.q]]
                if (
                    isinstance(prev, R)
                    and abs(prev.phi - g.phi) < _PRUNE_TOL
                    and abs(prev.theta + g.theta) < _PRUNE_TOL
                ):
                    del seq[pos]
                    del seq[last[g.q]]
                    changed = True
                    break
            for q in g.qubits:
                last[q] = pos
    return seq


@dataclass(frozen=True)
class CompiledCircuit:
    """Native circuit plus bookkeeping.

    ``provenance[k]`` is the index of the standard gate that produced native
    gate ``k``.
    """

    circuit: Circuit
    provenance: tuple
    n_xx: int
    n_r: int

    @property
    def n_qubits(self):
        return self.circuit.n_qubits

    @property
    def gates(self):
        return self.circuit.gates

    @property
    def total(self):
        return self.n_xx + self.n_r

    def counts(self):
        return {"r": self.n_r, "xx": self.n_xx, "total": self.total}


def compile_circuit(circuit, signs=None, prune=True):
    """Lower ``circuit`` gate by gate; no optimization across gate boundaries."""
    if signs is None:
        signs = default_sign_table(circuit.n_qubits)
    natives = []
    provenance = []
    for pos, gate in enumerate(circuit.gates):
        seq = compile_gate(gate, signs)
        if prune:
            seq = prune_identities(seq)
        natives.extend(seq)
        provenance.extend([pos] * len(seq))
    native = Circuit(circuit.n_qubits, tuple(natives), "native")
    return CompiledCircuit(
        native,
        tuple(provenance),
        n_xx=native.count(XX),
        n_r=native.count(R),
    )


def as_native(circuit):
    """Native :class:`Circuit` for a compiled or native circuit; refuse standard ones."""
    if isinstance(circuit, CompiledCircuit):
        return circuit.circuit
    if isinstance(circuit, Circuit) and circuit.level == "native":
        return circuit
    raise NotCompiledError("circuit contains standard gates; compile it first")


def unitary_of(circuit):
    """Full ``2**n x 2**n`` unitary of a circuit (gates applied in order)."""
    if isinstance(circuit, CompiledCircuit):
        circuit = circuit.circuit
    n = circuit.n_qubits
    if n > UNITARY_MAX_QUBITS:
        raise ResourceLimitError(f"unitary_of supports at most {UNITARY_MAX_QUBITS} qubits, got {n}")
    # rows of `basis` are states; after the loop row k holds U|k>
    basis = np.eye(2**n, dtype=complex)
    for g in circuit.gates:
        basis = apply_matrix(basis, g.matrix(), [q - 1 for q in g.qubits], n)
    return basis.T


def phase_distance(u, v):
    """``1 - |tr(U† V)| / dim``; zero iff equal up to a global phase."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape or u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ArgumentError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return 1.0 - abs(np.trace(u.conj().T @ v)) / u.shape[0]


def equivalent_up_to_global_phase(u, v, tol=1e-9):
    return phase_distance(u, v) <= tol
