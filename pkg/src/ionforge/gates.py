"""Native and standard gate sets.

The hardware executes two native instructions:

* ``R(q, theta, phi)``: rotation by ``theta`` about an equatorial axis at
  angle ``phi`` from X.
* ``XX(i, j, chi)``: Ising rotation ``exp(-i chi X_i X_j)``, whose sign on a
  given ion pair is fixed by the hardware (see :class:`SignTable`).

Standard logic gates (``H``, ``Rx``, ``Ry``, ``Rz``, ``CNOT``, ``CP``) are
what algorithms are written in; :mod:`ionforge.compiler` lowers them.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from .errors import CircuitValidationError, QubitIndexError, SignTableError

CHI_MAX = math.pi / 4
_CHI_SLACK = 1e-12


def r_matrix(theta, phi):
    """Equatorial rotation ``R_phi(theta)``."""
    c = math.cos(theta / 2)
    s = math.sin(theta / 2)
    return np.array(
        [
            [c, -1j * s * np.exp(-1j * phi)],
            [-1j * s * np.exp(1j * phi), c],
        ],
        dtype=complex,
    )


def xx_matrix(chi):
    """Ising gate ``XX(chi) = exp(-i chi X⊗X)``."""
    c = math.cos(chi)
    s = -1j * math.sin(chi)
    return np.array(
        [
            [c, 0, 0, s],
            [0, c, s, 0],
            [0, s, c, 0],
            [s, 0, 0, c],
        ],
        dtype=complex,
    )


def rz_matrix(theta):
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


H_MATRIX = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
CNOT_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


def cp_matrix(beta):
    return np.diag([1, 1, 1, np.exp(1j * beta)])


class Gate:
    """Common base. Subclasses are frozen dataclasses."""

    native = False
    name = ""

    @property
    def qubits(self):
        raise NotImplementedError

    def matrix(self):
        raise NotImplementedError


# -- standard gates ---------------------------------------------------------


@dataclass(frozen=True)
class H(Gate):
    q: int
    name = "h"

    @property
    def qubits(self):
        return (self.q,)

    def matrix(self):
        return H_MATRIX.copy()


@dataclass(frozen=True)
class Rx(Gate):
    q: int
    theta: float
    name = "rx"

    @property
    def qubits(self):
        return (self.q,)

    def matrix(self):
        return r_matrix(self.theta, 0.0)


@dataclass(frozen=True)
class Ry(Gate):
    q: int
    theta: float
    name = "ry"

    @property
    def qubits(self):
        return (self.q,)

    def matrix(self):
        return r_matrix(self.theta, math.pi / 2)


@dataclass(frozen=True)
class Rz(Gate):
    q: int
    theta: float
    name = "rz"

    @property
    def qubits(self):
        return (self.q,)

    def matrix(self):
        return rz_matrix(self.theta)


@dataclass(frozen=True)
class CNOT(Gate):
    control: int
    target: int
    name = "cnot"

    @property
    def qubits(self):
        return (self.control, self.target)

    def matrix(self):
        return CNOT_MATRIX.copy()


@dataclass(frozen=True)
class CP(Gate):
    """Controlled phase ``diag(1, 1, 1, exp(i beta))``."""

    control: int
    target: int
    beta: float
    name = "cp"

    @property
    def qubits(self):
        return (self.control, self.target)

    def matrix(self):
        return cp_matrix(self.beta)


# -- native gates -----------------------------------------------------------


@dataclass(frozen=True)
class R(Gate):
    q: int
    theta: float
    phi: float
    native = True
    name = "r"

    @property
    def qubits(self):
        return (self.q,)

    def matrix(self):
        return r_matrix(self.theta, self.phi)


@dataclass(frozen=True)
class XX(Gate):
    i: int
    j: int
    chi: float
    native = True
    name = "xx"

    def __post_init__(self):
        # XX is exchange symmetric; store the pair canonically.
        if self.i > self.j:
            i, j = self.j, self.i
            object.__setattr__(self, "i", i)
            object.__setattr__(self, "j", j)

    @property
    def qubits(self):
        return (self.i, self.j)

    def matrix(self):
        return xx_matrix(self.chi)


STANDARD_GATES = (H, Rx, Ry, Rz, CNOT, CP)
NATIVE_GATES = (R, XX)


def standard_matrix(gate):
    """Exact matrix of a standard gate (2x2 or 4x4, control as high bit)."""
    if not isinstance(gate, STANDARD_GATES):
        raise TypeError(f"{type(gate).__name__} is not a standard gate")
    return gate.matrix()


# -- sign table -------------------------------------------------------------


def _pair(i, j):
    return (i, j) if i < j else (j, i)


class SignTable:
    """Immutable map from an unordered qubit pair to its Ising sign (+1 or -1).

    ``assumed`` is set when the table was filled with defaults rather than
    taken from a measured assignment.
    """

    __slots__ = ("_n", "_signs", "_assumed")

    def __init__(self, n_qubits, signs, assumed=False):
        table = {}
        for key, value in dict(signs).items():
            i, j = key
            if i == j:
                raise SignTableError(f"pair ({i}, {j}) is not a pair of distinct qubits")
            if not (1 <= i <= n_qubits and 1 <= j <= n_qubits):
                raise SignTableError(f"pair ({i}, {j}) outside register of {n_qubits} qubits")
            if value not in (1, -1):
                raise SignTableError(f"sign for pair ({i}, {j}) must be +1 or -1, got {value!r}")
            table[_pair(i, j)] = int(value)
        missing = [p for p in combinations(range(1, n_qubits + 1), 2) if p not in table]
        if missing:
            raise SignTableError(f"sign table lacks entries for pairs {missing}")
        object.__setattr__(self, "_n", int(n_qubits))
        object.__setattr__(self, "_signs", table)
        object.__setattr__(self, "_assumed", bool(assumed))

    def __setattr__(self, name, value):
        raise AttributeError("SignTable is immutable")

    @property
    def n_qubits(self):
        return self._n

    @property
    def assumed(self):
        return self._assumed

    def __getitem__(self, pair):
        i, j = pair
        try:
            return self._signs[_pair(i, j)]
        except KeyError:
            raise SignTableError(f"no Ising sign configured for pair ({i}, {j})") from None

    def __iter__(self):
        return iter(sorted(self._signs))

    def __len__(self):
        return len(self._signs)

    def __eq__(self, other):
        return isinstance(other, SignTable) and self._n == other._n and self._signs == other._signs

    def __hash__(self):
        return hash((self._n, tuple(sorted(self._signs.items()))))

    def __repr__(self):
        body = ", ".join(f"{i}{j}:{s:+d}" for (i, j), s in sorted(self._signs.items()))
        return f"SignTable(n={self._n}, {{{body}}})"

    def items(self):
        return sorted(self._signs.items())

    def with_sign(self, pair, sign):
        signs = dict(self._signs)
        signs[_pair(*pair)] = sign
        return SignTable(self._n, signs)

    @classmethod
    def uniform(cls, n_qubits, sign=1):
        return cls(n_qubits, {p: sign for p in combinations(range(1, n_qubits + 1), 2)})

    @classmethod
    def from_text(cls, text, n_qubits=None):
        """Parse ``i j ±1`` lines (``#`` starts a comment)."""
        signs = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise SignTableError(f"line {lineno}: expected 'i j sign', got {raw!r}")
            try:
                i, j, s = int(parts[0]), int(parts[1]), int(parts[2])
            except ValueError:
                raise SignTableError(f"line {lineno}: non-integer field in {raw!r}") from None
            if _pair(i, j) in signs:
                raise SignTableError(f"line {lineno}: duplicate entry for pair ({i}, {j})")
            signs[_pair(i, j)] = s
        if n_qubits is None:
            n_qubits = max((max(p) for p in signs), default=1)
        return cls(n_qubits, signs)

    @classmethod
    def from_file(cls, path, n_qubits=None):
        return cls.from_text(Path(path).read_text(), n_qubits)

    def to_text(self):
        return "".join(f"{i} {j} {s:+d}\n" for (i, j), s in self.items())


# Measured assignment for the five-ion chain. The source lists (2,5) twice and
# omits (2,4); we keep seven +1 and three -1 entries with (2,5) = -1.
_FIVE_ION_SIGNS = {
    (1, 2): 1, (4, 5): 1, (1, 4): 1, (2, 4): 1, (3, 5): 1, (2, 3): 1, (3, 4): 1,
    (1, 5): -1, (2, 5): -1, (1, 3): -1,
}


def default_sign_table(n=5):
    """Ising signs of the reference five-ion machine.

    For any other register size every pair is set to +1, the table is marked
    ``assumed`` and a warning is emitted. Compiled gates are correct for any
    table, so this only changes which native angles appear.
    """
    if n == 5:
        return SignTable(5, _FIVE_ION_SIGNS)
    warnings.warn(f"no measured Ising signs for {n} qubits; assuming +1 on all pairs", stacklevel=2)
    return SignTable(n, {p: 1 for p in combinations(range(1, n + 1), 2)}, assumed=True)


# -- circuits ---------------------------------------------------------------


@dataclass(frozen=True)
class Circuit:
    """Ordered gate sequence on ``n_qubits``.

    A circuit is either all standard gates (``level == "standard"``) or all
    native gates (``level == "native"``). An empty circuit takes whatever level
    it is given, defaulting to standard.
    """

    n_qubits: int
    gates: tuple = ()
    level: str | None = None

    def __post_init__(self):
        gates = tuple(self.gates)
        object.__setattr__(self, "gates", gates)
        if self.n_qubits < 1:
            raise CircuitValidationError(f"circuit needs at least one qubit, got {self.n_qubits}")
        kinds = {g.native for g in gates}
        for g in gates:
            if not isinstance(g, STANDARD_GATES + NATIVE_GATES):
                raise CircuitValidationError(f"unsupported gate {g!r}")
        if len(kinds) > 1:
            raise CircuitValidationError("circuit mixes standard and native gates")
        inferred = ("native" if kinds.pop() else "standard") if kinds else (self.level or "standard")
        if self.level is not None and self.level != inferred:
            raise CircuitValidationError(f"level tag {self.level!r} disagrees with contents ({inferred})")
        object.__setattr__(self, "level", inferred)
        for pos, g in enumerate(gates):
            qs = g.qubits
            for q in qs:
                if isinstance(q, bool) or not isinstance(q, (int, np.integer)) or not 1 <= q <= self.n_qubits:
                    raise QubitIndexError(f"gate {pos} ({g.name}) uses qubit {q!r} outside 1..{self.n_qubits}")
            if len(qs) == 2 and qs[0] == qs[1]:
                raise CircuitValidationError(f"gate {pos} ({g.name}) acts twice on qubit {qs[0]}")
            if isinstance(g, XX) and abs(g.chi) > CHI_MAX + _CHI_SLACK:
                raise CircuitValidationError(
                    f"gate {pos}: |chi| = {abs(g.chi):.6g} exceeds the calibrated maximum pi/4"
                )

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        if other.n_qubits != self.n_qubits:
            raise CircuitValidationError("cannot concatenate circuits of different sizes")
        level = self.level if self.gates else other.level
        return Circuit(self.n_qubits, self.gates + other.gates, level if self.gates or other.gates else self.level)

    def count(self, gate_type):
        return sum(isinstance(g, gate_type) for g in self.gates)
