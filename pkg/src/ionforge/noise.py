"""Parametric error model and readout mitigation.

Gate errors are stochastic Pauli trajectories: after each native gate a
uniformly random non-identity Pauli hits the gate's qubit(s) with
probability ``p1`` (R) or ``p2`` (XX). Addressing crosstalk is a coherent
same-axis under-rotation of the nearest neighbours of every R gate. Readout
flips each measured bit independently.

Random streams are split so that a noiseless model consumes exactly the
same measurement stream as :func:`ionforge.statevector.sample`; a zero
model therefore reproduces ideal sampling count for count.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from functools import reduce
from itertools import product
from pathlib import Path

import numpy as np

from .compiler import as_native
from .errors import ArgumentError, IllConditionedError, IntegrityError, SizeError
from .gates import R, XX, r_matrix
from .statevector import (
    NORM_TOL,
    Histogram,
    apply_matrix,
    apply_single,
    apply_two,
    init_zero,
    probabilities,
    rng,
)

# measurement stream 0 is shared with statevector.sample
_STREAM_ERRORS = 1
_STREAM_READOUT = 2
_BATCH = 4096

PAULI_1Q = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
# index 4*a + b is P_a ⊗ P_b; index 0 is the identity
PAULI_2Q = tuple(np.kron(a, b) for a, b in product(PAULI_1Q, PAULI_1Q))


@dataclass(frozen=True)
class NoiseModel:
    """Error parameters.

    Attributes
    ----------
    p1, p2 : float
        Depolarizing probability after each R and each XX gate.
    crosstalk : float
        Fraction of an R rotation leaking onto each neighbouring ion.
    r01 : float
        P(read 1 | prepared 0).
    r10 : float
        P(read 0 | prepared 1).
    """

    p1: float = 0.0
    p2: float = 0.0
    crosstalk: float = 0.04
    r01: float = 0.0026
    r10: float = 0.0091

    def __post_init__(self):
        for name in ("p1", "p2", "r01", "r10"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ArgumentError(f"{name} must lie in [0, 1], got {value!r}")
        if not 0.0 <= self.crosstalk <= 0.1:
            raise ArgumentError(f"crosstalk must lie in [0, 0.1], got {self.crosstalk!r}")

    @classmethod
    def ideal(cls):
        return cls(0.0, 0.0, 0.0, 0.0, 0.0)

    @property
    def is_ideal(self):
        return self.p1 == self.p2 == self.crosstalk == self.r01 == self.r10 == 0.0

    _KEYS = {"p1": "p1", "p2": "p2", "ct": "crosstalk", "crosstalk": "crosstalk", "r01": "r01", "r10": "r10"}

    @classmethod
    def parse(cls, spec, base=None):
        """Build from ``"p1=0.01,p2=0.02,ct=0.04,r01=0.003,r10=0.009"``.

        Keys not mentioned keep the value from ``base`` (default: class
        defaults). ``"ideal"`` or ``"none"`` gives the zero model.
        """
        spec = spec.strip()
        if spec.lower() in ("ideal", "none", "0"):
            return cls.ideal()
        model = base if base is not None else cls()
        updates = {}
        for item in filter(None, (s.strip() for s in spec.replace("\n", ",").split(","))):
            if item.startswith("#"):
                continue
            key, sep, value = item.partition("=")
            key = key.strip().lower()
            if not sep or key not in cls._KEYS:
                raise ArgumentError(f"bad noise setting {item!r}; keys are p1, p2, ct, r01, r10")
            try:
                updates[cls._KEYS[key]] = float(value)
            except ValueError:
                raise ArgumentError(f"noise setting {item!r} has a non-numeric value") from None
        return replace(model, **updates)

    @classmethod
    def from_file(cls, path):
        lines = [ln.split("#", 1)[0] for ln in Path(path).read_text().splitlines()]
        return cls.parse(",".join(ln for ln in lines if ln.strip()))

    def confusion(self, n_qubits):
        return build_confusion((self.r01, self.r10), n_qubits)


def _expand(native, model):
    """Native gates as ``(ops, error_qubits, p)``; ops include crosstalk rotations."""
    n = native.n_qubits
    steps = []
    for g in native.gates:
        ops = [([q - 1 for q in g.qubits], g.matrix())]
        if isinstance(g, R):
            if model.crosstalk > 0:
                leak = r_matrix(model.crosstalk * g.theta, g.phi)
                for nb in (g.q - 1, g.q + 1):
                    if 1 <= nb <= n:
                        ops.append(([nb - 1], leak))
            p = model.p1
        elif isinstance(g, XX):
            p = model.p2
        else:
            raise ArgumentError(f"unexpected gate in native circuit: {g!r}")
        steps.append((ops, [q - 1 for q in g.qubits], p))
    return steps


def _error_free(n, steps):
    state = init_zero(n)
    for ops, _, _ in steps:
        for qs, u in ops:
            if len(qs) == 1:
                state = apply_single(state, qs[0] + 1, u)
            else:
                state = apply_two(state, qs[0] + 1, qs[1] + 1, u)
    return state


def _faulty_trajectories(n, steps, err_cols, faults, paulis, meas_rng):
    """Simulate shots that suffered at least one Pauli error; return outcomes."""
    col_of_step = {step: c for c, step in enumerate(err_cols)}
    outcomes = np.empty(faults.shape[0], dtype=np.int64)
    for start in range(0, faults.shape[0], _BATCH):
        f = faults[start:start + _BATCH]
        pa = paulis[start:start + _BATCH]
        psi = np.zeros((f.shape[0], 2**n), dtype=complex)
        psi[:, 0] = 1.0
        for s, (ops, eq, _) in enumerate(steps):
            for qs, u in ops:
                psi = apply_matrix(psi, u, qs, n)
            c = col_of_step.get(s)
            if c is None:
                continue
            hit = np.flatnonzero(f[:, c])
            if hit.size == 0:
                continue
            table = PAULI_1Q if len(eq) == 1 else PAULI_2Q
            for k in np.unique(pa[hit, c]):
                rows = hit[pa[hit, c] == k]
                psi[rows] = apply_matrix(psi[rows], table[k], eq, n)
        prob = np.abs(psi) ** 2
        norms = prob.sum(axis=1)
        if np.any(np.abs(norms - 1.0) > NORM_TOL):
            raise IntegrityError("trajectory norm drifted beyond 1e-9")
        cdf = np.cumsum(prob / norms[:, None], axis=1)
        u = meas_rng.random(f.shape[0])
        idx = (cdf < u[:, None]).sum(axis=1)
        outcomes[start:start + f.shape[0]] = np.minimum(idx, 2**n - 1)
    return outcomes


def _readout_flips(counts, n, r01, r10, gen):
    outcomes = np.repeat(np.arange(counts.size), counts)
    for q in range(n):
        shift = n - 1 - q
        bits = (outcomes >> shift) & 1
        flip_p = np.where(bits == 1, r10, r01)
        flips = gen.random(outcomes.size) < flip_p
        outcomes = outcomes ^ (flips.astype(np.int64) << shift)
    return np.bincount(outcomes, minlength=counts.size)


def coherent_trajectory(circuit, model):
    """Final state of the shots that suffer no Pauli error (crosstalk included)."""
    native = as_native(circuit)
    return _error_free(native.n_qubits, _expand(native, model))


def run_noisy(circuit, model, shots, seed=None):
    """Sample ``shots`` noisy executions of a compiled (native) circuit.

    Returns a counts :class:`Histogram`. Standard-level circuits raise
    :class:`~ionforge.errors.NotCompiledError`.
    """
    native = as_native(circuit)
    if isinstance(shots, bool) or not isinstance(shots, (int, np.integer)) or shots < 1:
        raise ArgumentError(f"shots must be a positive integer, got {shots!r}")
    n = native.n_qubits
    steps = _expand(native, model)
    base = probabilities(_error_free(n, steps)).entries

    err_cols = [s for s, (_, _, p) in enumerate(steps) if p > 0]
    err_rng = rng(seed, _STREAM_ERRORS)
    if err_cols:
        p_vec = np.array([steps[s][2] for s in err_cols])
        mask = err_rng.random((shots, len(err_cols))) < p_vec
        faulty = np.flatnonzero(mask.any(axis=1))
    else:
        mask = np.zeros((shots, 0), dtype=bool)
        faulty = np.empty(0, dtype=np.int64)

    meas = rng(seed)
    counts = meas.multinomial(shots - faulty.size, base).astype(np.int64)
    if faulty.size:
        faults = mask[faulty]
        sizes = np.array([16 if len(steps[s][1]) == 2 else 4 for s in err_cols])
        paulis = 1 + np.floor(err_rng.random(faults.shape) * (sizes - 1)).astype(np.int64)
        outcomes = _faulty_trajectories(n, steps, err_cols, faults, paulis, meas)
        counts += np.bincount(outcomes, minlength=2**n)

    if model.r01 > 0 or model.r10 > 0:
        counts = _readout_flips(counts, n, model.r01, model.r10, rng(seed, _STREAM_READOUT))
    return Histogram(n, counts, "counts", int(shots))


# -- readout confusion and correction --------------------------------------


@dataclass(frozen=True)
class ConfusionMatrix:
    """Column-stochastic detector response, ``matrix[observed, true]``."""

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        dim = 2**self.n_qubits
        if m.shape != (dim, dim):
            raise SizeError(f"confusion matrix must be {dim}x{dim}, got {m.shape}")
        if np.any(m < 0) or not np.allclose(m.sum(axis=0), 1.0, atol=1e-12, rtol=0):
            raise ArgumentError("confusion matrix must be non-negative with unit column sums")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_array(cls, matrix):
        m = np.asarray(matrix, dtype=float)
        n = int(round(np.log2(m.shape[0])))
        return cls(n, m)

    def apply(self, p):
        return self.matrix @ np.asarray(p, dtype=float)

    def to_csv(self):
        buf = io.StringIO()
        buf.write("# confusion matrix, rows = observed, columns = true state, bit_order=X1-msb\n")
        w = csv.writer(buf, lineterminator="\n")
        labels = [format(k, f"0{self.n_qubits}b") for k in range(2**self.n_qubits)]
        w.writerow(["observed\\true", *labels])
        for label, row in zip(labels, self.matrix):
            w.writerow([label, *(repr(float(x)) for x in row)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        rows = list(csv.reader(ln for ln in text.splitlines() if not ln.startswith("#")))
        return cls.from_array([[float(x) for x in r[1:]] for r in rows[1:]])


def single_qubit_confusion(r01, r10):
    for name, v in (("r01", r01), ("r10", r10)):
        if not 0.0 <= v <= 1.0:
            raise ArgumentError(f"{name} must lie in [0, 1], got {v!r}")
    return np.array([[1.0 - r01, r10], [r01, 1.0 - r10]])


def build_confusion(errors, n_qubits):
    """Tensor product of per-qubit confusion matrices.

    ``errors`` is one ``(r01, r10)`` pair used for every qubit, or a sequence
    of ``n_qubits`` pairs ordered from qubit 1.
    """
    errors = np.asarray(errors, dtype=float)
    if errors.shape == (2,):
        errors = np.tile(errors, (n_qubits, 1))
    if errors.shape != (n_qubits, 2):
        raise ArgumentError(f"expected one (r01, r10) pair or {n_qubits} pairs")
    blocks = [single_qubit_confusion(a, b) for a, b in errors]
    return ConfusionMatrix(n_qubits, reduce(np.kron, blocks))


def project_simplex(v):
    """Euclidean projection onto ``{p : p >= 0, sum(p) = 1}``."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    tau = css[rho] / (rho + 1)
    return np.maximum(v - tau, 0.0)


def correct_readout(hist, confusion, tol=1e-10, max_iter=100_000):
    """Undo detector errors by simplex-constrained least squares.

    Solves ``min ||M p - h||_2`` over probability vectors ``p`` with an
    accelerated projected-gradient method, starting from the projected
    unconstrained solution. Iteration stops when the gradient-mapping norm
    falls below ``tol``.
    """
    m = confusion.matrix if isinstance(confusion, ConfusionMatrix) else np.asarray(confusion, dtype=float)
    h = hist.frequencies() if isinstance(hist, Histogram) else np.asarray(hist, dtype=float)
    if m.shape != (h.size, h.size):
        raise SizeError(f"confusion matrix {m.shape} does not match histogram of length {h.size}")
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > 1e12:
        raise IllConditionedError(f"confusion matrix condition number {cond:.3g} exceeds 1e12")

    step = 1.0 / np.linalg.norm(m, 2) ** 2
    mtm = m.T @ m
    mth = m.T @ h
    p = project_simplex(np.linalg.solve(m, h))
    y = p.copy()
    t = 1.0
    for _ in range(max_iter):
        grad = mtm @ p - mth
        if np.linalg.norm(p - project_simplex(p - step * grad)) / step <= tol:
            break
        p_next = project_simplex(y - step * (mtm @ y - mth))
        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        y = p_next + ((t - 1.0) / t_next) * (p_next - p)
        p, t = p_next, t_next
    p = p / p.sum()
    n = int(round(np.log2(h.size)))
    return Histogram(n, p)


def readout_standard_errors(hist, confusion):
    """Delta-method standard errors of the inverted populations ``M^-1 h``.

    Multinomial covariance of the observed frequencies propagated through the
    inverse confusion matrix; needs a counts histogram.
    """
    if not isinstance(hist, Histogram) or hist.kind != "counts":
        raise ArgumentError("standard errors need a counts histogram")
    m = confusion.matrix if isinstance(confusion, ConfusionMatrix) else np.asarray(confusion, dtype=float)
    h = hist.frequencies()
    m_inv = np.linalg.inv(m)
    cov = (np.diag(h) - np.outer(h, h)) / hist.shots
    return np.sqrt(np.clip(np.einsum("ij,jk,ik->i", m_inv, cov, m_inv), 0.0, None))
