"""Dense state-vector simulation core.

Qubits are labelled ``1..n`` from the outside. Qubit 1 is the most
significant bit of a basis-state index, so for ``n = 3`` the index of
``|X1 X2 X3> = |110>`` is 6. Internally a register is an array of
``2**n`` complex amplitudes which is viewed as an ``n``-dimensional
``(2, 2, ..., 2)`` tensor whose axis ``q - 1`` belongs to qubit ``q``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ArgumentError,
    EmptyConditionError,
    IntegrityError,
    QubitIndexError,
    SizeError,
    UnitaryValidationError,
)

MAX_QUBITS = 24
NORM_TOL = 1e-9
UNITARY_TOL = 1e-9
BIT_ORDER = "X1-msb"


def rng(seed, *stream):
    """Counter-based generator keyed by ``seed`` and an optional stream path."""
    if seed is None:
        ss = np.random.SeedSequence()
    else:
        ss = np.random.SeedSequence([int(seed), *stream] if stream else int(seed))
    return np.random.Generator(np.random.Philox(ss))


def apply_matrix(psi, u, qubits, n_qubits):
    """Apply the ``2**k x 2**k`` matrix ``u`` to 0-based ``qubits`` of ``psi``.

    ``psi`` has shape ``batch + (2**n_qubits,)``; the batch axes are carried
    along untouched. The first entry of ``qubits`` is the most significant
    bit of ``u``'s row/column index.
    """
    batch = psi.shape[:-1]
    nb = len(batch)
    k = len(qubits)
    t = psi.reshape(batch + (2,) * n_qubits)
    ut = np.asarray(u).reshape((2,) * (2 * k))
    axes = [nb + q for q in qubits]
    t = np.tensordot(ut, t, axes=(list(range(k, 2 * k)), axes))
    t = np.moveaxis(t, list(range(k)), axes)
    return np.ascontiguousarray(t).reshape(batch + (2**n_qubits,))


def _check_unitary(u, dim):
    u = np.asarray(u, dtype=complex)
    if u.shape != (dim, dim):
        raise UnitaryValidationError(f"expected a {dim}x{dim} matrix, got shape {u.shape}")
    if not np.allclose(u.conj().T @ u, np.eye(dim), atol=UNITARY_TOL, rtol=0):
        raise UnitaryValidationError("matrix is not unitary within 1e-9")
    return u


@dataclass(frozen=True)
class StateVector:
    """An ``n``-qubit pure state. Treated as an immutable value."""

    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise SizeError(f"register size must be in [1, {MAX_QUBITS}], got {self.n_qubits}")
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2**self.n_qubits:
            raise SizeError(f"expected {2**self.n_qubits} amplitudes, got {amps.size}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise IntegrityError(f"state norm {norm!r} deviates from 1 by more than {NORM_TOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes):
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        n = int(round(np.log2(amps.size))) if amps.size else 0
        if amps.size == 0 or 2**n != amps.size:
            raise SizeError(f"amplitude count {amps.size} is not a power of two")
        return cls(n, amps)

    @classmethod
    def product(cls, factors):
        """Product state from per-qubit ``(a0, a1)`` pairs, qubit 1 first."""
        amps = np.ones(1, dtype=complex)
        for a in factors:
            a = np.asarray(a, dtype=complex)
            amps = np.kron(amps, a / np.linalg.norm(a))
        return cls.from_amplitudes(amps)

    def __len__(self):
        return self.amplitudes.size


def _check_qubit(q, n):
    if isinstance(q, bool) or not isinstance(q, (int, np.integer)) or not 1 <= q <= n:
        raise QubitIndexError(f"qubit index {q!r} outside 1..{n}")


def init_zero(n):
    """|0...0> on ``n`` qubits."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_QUBITS:
        raise SizeError(f"register size must be in [1, {MAX_QUBITS}], got {n!r}")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = 1.0
    return StateVector(int(n), amps)


def apply_single(state, q, u):
    """Apply a 2x2 unitary ``u`` to qubit ``q`` (1-based)."""
    _check_qubit(q, state.n_qubits)
    u = _check_unitary(u, 2)
    amps = apply_matrix(state.amplitudes, u, [q - 1], state.n_qubits)
    return StateVector(state.n_qubits, amps)


def apply_two(state, q1, q2, u):
    """Apply a 4x4 unitary ``u`` to qubits ``(q1, q2)``; ``q1`` is the high bit of ``u``."""
    _check_qubit(q1, state.n_qubits)
    _check_qubit(q2, state.n_qubits)
    if q1 == q2:
        raise QubitIndexError(f"two-qubit gate needs distinct qubits, got {q1} twice")
    u = _check_unitary(u, 4)
    amps = apply_matrix(state.amplitudes, u, [q1 - 1, q2 - 1], state.n_qubits)
    return StateVector(state.n_qubits, amps)


def simulate(circuit, initial=None):
    """Run every gate of ``circuit`` on ``initial`` (default |0...0>).

    Works with any object exposing ``n_qubits`` and ``gates``, where each gate
    has 1-based ``qubits`` and a ``matrix()``.
    """
    state = init_zero(circuit.n_qubits) if initial is None else initial
    if state.n_qubits != circuit.n_qubits:
        raise SizeError(f"state has {state.n_qubits} qubits, circuit needs {circuit.n_qubits}")
    for gate in circuit.gates:
        qs = gate.qubits
        if len(qs) == 1:
            state = apply_single(state, qs[0], gate.matrix())
        else:
            state = apply_two(state, qs[0], qs[1], gate.matrix())
    return state


@dataclass(frozen=True)
class Histogram:
    """Distribution over the ``2**n`` computational outcomes.

    ``kind`` is ``"probability"`` (entries sum to one) or ``"counts"``
    (non-negative integers summing to ``shots``).
    """

    n_qubits: int
    entries: np.ndarray = field(repr=False)
    kind: str = "probability"
    shots: int | None = None

    def __post_init__(self):
        if self.kind not in ("probability", "counts"):
            raise ArgumentError(f"unknown histogram kind {self.kind!r}")
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise SizeError(f"register size must be in [1, {MAX_QUBITS}], got {self.n_qubits}")
        if self.kind == "counts":
            entries = np.asarray(self.entries)
            if entries.size and not np.all(np.equal(np.mod(entries, 1), 0)):
                raise ArgumentError("counts must be integers")
            entries = entries.astype(np.int64)
            total = int(entries.sum())
            shots = total if self.shots is None else int(self.shots)
            if shots != total:
                raise ArgumentError(f"counts sum to {total}, declared shots {shots}")
            object.__setattr__(self, "shots", shots)
        else:
            entries = np.asarray(self.entries, dtype=float)
            if abs(entries.sum() - 1.0) > NORM_TOL:
                raise IntegrityError(f"probabilities sum to {entries.sum()!r}")
        entries = entries.reshape(-1).copy()
        if entries.size != 2**self.n_qubits:
            raise SizeError(f"expected {2**self.n_qubits} entries, got {entries.size}")
        if np.any(entries < 0):
            raise ArgumentError("histogram entries must be non-negative")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    def frequencies(self):
        """Entries as a probability vector regardless of kind."""
        if self.kind == "probability":
            return np.array(self.entries, dtype=float)
        return self.entries / self.shots

    def normalized(self):
        if self.kind == "probability":
            return self
        return Histogram(self.n_qubits, self.frequencies())

    def bitstring(self, index):
        return format(index, f"0{self.n_qubits}b")

    def to_dict(self):
        values = [int(v) for v in self.entries] if self.kind == "counts" else [float(v) for v in self.entries]
        d = {"n_qubits": self.n_qubits, "kind": self.kind, "entries": values, "bit_order": BIT_ORDER}
        if self.kind == "counts":
            d["shots"] = self.shots
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        if d.get("bit_order", BIT_ORDER) != BIT_ORDER:
            raise ArgumentError(f"unsupported bit order {d['bit_order']!r}")
        return cls(int(d["n_qubits"]), np.asarray(d["entries"]), d["kind"], d.get("shots"))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_csv(self):
        buf = io.StringIO()
        buf.write(f"# n_qubits={self.n_qubits} kind={self.kind} bit_order={BIT_ORDER}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "bitstring", "value"])
        for k, v in enumerate(self.entries):
            w.writerow([k, self.bitstring(k), int(v) if self.kind == "counts" else repr(float(v))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        lines = text.splitlines()
        meta = dict(tok.split("=", 1) for tok in lines[0].lstrip("# ").split())
        if meta.get("bit_order") != BIT_ORDER:
            raise ArgumentError("CSV header lacks the X1-msb bit-order marker")
        rows = list(csv.DictReader(lines[1:]))
        kind = meta["kind"]
        conv = int if kind == "counts" else float
        return cls(int(meta["n_qubits"]), np.array([conv(r["value"]) for r in rows]), kind)


def probabilities(state):
    """Exact outcome probabilities ``|a_k|**2``."""
    p = np.abs(state.amplitudes) ** 2
    return Histogram(state.n_qubits, p / p.sum())


def sample(state, shots, seed=None):
    """Draw ``shots`` measurement outcomes; deterministic for a fixed ``seed``."""
    if isinstance(shots, bool) or not isinstance(shots, (int, np.integer)) or shots < 1:
        raise ArgumentError(f"shots must be a positive integer, got {shots!r}")
    p = probabilities(state).entries
    counts = rng(seed).multinomial(int(shots), p)
    return Histogram(state.n_qubits, counts, "counts", int(shots))


def _bit_mask(n, q):
    idx = np.arange(2**n)
    return (idx >> (n - q)) & 1


def postselect(hist, q, value):
    """Keep outcomes whose qubit ``q`` equals ``value``.

    Returns ``(histogram, retained_fraction)``. Probability histograms are
    renormalized; counts histograms keep the raw surviving counts.
    """
    _check_qubit(q, hist.n_qubits)
    if value not in (0, 1):
        raise ArgumentError(f"condition value must be 0 or 1, got {value!r}")
    keep = _bit_mask(hist.n_qubits, q) == value
    freq = hist.frequencies()
    retained = float(freq[keep].sum())
    if retained <= 0.0:
        raise EmptyConditionError(f"no probability mass with X{q}={value}")
    if hist.kind == "counts":
        entries = np.where(keep, hist.entries, 0)
        return Histogram(hist.n_qubits, entries, "counts"), retained
    entries = np.where(keep, freq, 0.0) / retained
    return Histogram(hist.n_qubits, entries), retained


def marginal(hist, qubits):
    """Marginal distribution on ``qubits`` (in the given order, first = msb)."""
    for q in qubits:
        _check_qubit(q, hist.n_qubits)
    if len(set(qubits)) != len(qubits):
        raise ArgumentError("marginal qubits must be distinct")
    n = hist.n_qubits
    t = hist.entries.reshape((2,) * n)
    others = tuple(ax for ax in range(n) if ax + 1 not in qubits)
    m = t.sum(axis=others)
    # remaining axes are in ascending qubit order; permute to requested order
    order = sorted(qubits)
    m = np.transpose(m, [order.index(q) for q in qubits]).reshape(-1)
    if hist.kind == "counts":
        return Histogram(len(qubits), m, "counts", hist.shots)
    return Histogram(len(qubits), m / m.sum())


def sso_fidelity(p, q):
    """Squared statistical overlap ``(sum_k sqrt(p_k q_k))**2``."""
    if p.kind != "probability" or q.kind != "probability":
        raise ArgumentError("sso_fidelity needs probability histograms")
    if p.entries.size != q.entries.size:
        raise ArgumentError(f"length mismatch: {p.entries.size} vs {q.entries.size}")
    s = float(np.sum(np.sqrt(p.entries * q.entries)))
    return min(1.0, s * s)


def total_variation(p, q):
    """Half the L1 distance between two distributions (arrays or histograms)."""
    a = p.frequencies() if isinstance(p, Histogram) else np.asarray(p, dtype=float)
    b = q.frequencies() if isinstance(q, Histogram) else np.asarray(q, dtype=float)
    if a.shape != b.shape:
        raise ArgumentError(f"length mismatch: {a.size} vs {b.size}")
    return 0.5 * float(np.abs(a - b).sum())
