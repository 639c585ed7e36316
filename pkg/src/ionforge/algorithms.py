"""Circuit builders and runners for the five-qubit benchmark experiments.

Every runner goes through the same path: build a standard circuit, compile
it to native gates for a given sign table, then either evaluate exact
probabilities (``shots=0``, no noise), sample ideally, or sample under a
:class:`~ionforge.noise.NoiseModel`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .compiler import compile_circuit
from .errors import ArgumentError
from .gates import CNOT, CP, Circuit, H, Rx, Ry, Rz, default_sign_table
from .noise import correct_readout, run_noisy
from .statevector import (
    Histogram,
    marginal,
    postselect,
    probabilities,
    sample,
    simulate,
    sso_fidelity,
)

N_QUBITS = 5
HALF_PI = math.pi / 2


# -- execution --------------------------------------------------------------


def execute(circuit, *, signs=None, noise=None, shots=0, seed=None, mitigate=False):
    """Compile and run ``circuit``; returns a :class:`Histogram`.

    ``shots=0`` means exact probabilities and requires ``noise`` to be None.
    With ``mitigate`` the noisy counts are passed through readout correction
    using the model's own confusion matrix.
    """
    if shots < 0:
        raise ArgumentError(f"shots must be >= 0, got {shots}")
    compiled = compile_circuit(circuit, signs)
    if noise is None:
        state = simulate(compiled.circuit)
        return probabilities(state) if shots == 0 else sample(state, shots, seed)
    if shots == 0:
        raise ArgumentError("a noise model needs shots > 0 (trajectory sampling)")
    hist = run_noisy(compiled, noise, shots, seed)
    if mitigate:
        return correct_readout(hist, noise.confusion(circuit.n_qubits))
    return hist


def _derived_seed(seed, k):
    return None if seed is None else int(np.random.SeedSequence([int(seed), k]).generate_state(1)[0])


# -- Deutsch-Jozsa ----------------------------------------------------------


@dataclass(frozen=True)
class DJOracle:
    """``kind`` is ``"constant0"``, ``"constant1"`` or ``"balanced"``.

    A balanced oracle is the parity of the control qubits in ``subset``.
    """

    kind: str
    subset: tuple = ()

    def __post_init__(self):
        if self.kind not in ("constant0", "constant1", "balanced"):
            raise ArgumentError(f"unknown oracle kind {self.kind!r}")
        subset = tuple(sorted(set(self.subset)))
        if self.kind == "balanced":
            if not subset or any(s not in (1, 2, 3) for s in subset):
                raise ArgumentError(f"balanced oracle needs a nonempty subset of {{1,2,3}}, got {self.subset}")
        elif subset:
            raise ArgumentError("constant oracles take no subset")
        object.__setattr__(self, "subset", subset)

    @property
    def is_constant(self):
        return self.kind != "balanced"

    def __call__(self, x):
        """Classical value f(x) for a 3-bit input (X1 most significant)."""
        if self.kind == "constant0":
            return 0
        if self.kind == "constant1":
            return 1
        return sum((x >> (3 - s)) & 1 for s in self.subset) % 2

    @property
    def label(self):
        return self.kind if self.is_constant else "balanced:" + "".join(map(str, self.subset))

    @classmethod
    def parse(cls, text):
        text = text.strip().lower()
        if text.startswith("balanced"):
            _, _, digits = text.partition(":")
            return cls("balanced", tuple(int(d) for d in digits.replace(",", "")))
        return cls(text)


def all_dj_oracles():
    """Both constant functions and the seven parity-balanced ones."""
    balanced = [DJOracle("balanced", s) for r in (1, 2, 3) for s in combinations((1, 2, 3), r)]
    return [DJOracle("constant0"), DJOracle("constant1"), *balanced]


def build_dj_circuit(oracle):
    gates = [Ry(q, HALF_PI) for q in (1, 2, 3)]
    gates.append(Ry(5, -HALF_PI))
    if oracle.kind == "constant1":
        gates.append(Rx(4, math.pi))
    elif oracle.kind == "balanced":
        gates.extend(CNOT(s, 4) for s in oracle.subset)
    gates.append(CNOT(4, 5))
    gates.extend(Ry(q, HALF_PI) for q in range(1, 6))
    return Circuit(N_QUBITS, tuple(gates))


@dataclass
class DJResult:
    oracle: DJOracle
    verdict: str
    success_probability: float
    retained_fraction: float
    histogram: Histogram = field(repr=False)

    def to_dict(self):
        return {
            "algo": "dj",
            "oracle": self.oracle.label,
            "verdict": self.verdict,
            "success_probability": self.success_probability,
            "retained_fraction": self.retained_fraction,
            "histogram": self.histogram.to_dict(),
        }


def run_dj(oracle, *, signs=None, noise=None, shots=0, seed=None, mitigate=False):
    """Run DJ, condition on X4 = 1 and read the verdict from outcome 111."""
    hist = execute(build_dj_circuit(oracle), signs=signs, noise=noise, shots=shots, seed=seed, mitigate=mitigate)
    cond, retained = postselect(hist, 4, 1)
    control = marginal(cond, (1, 2, 3)).frequencies()
    p111 = float(control[0b111] / control.sum())
    verdict = "constant" if p111 > 0.5 else "balanced"
    success = p111 if oracle.is_constant else 1.0 - p111
    return DJResult(oracle, verdict, success, retained, hist)


# -- Bernstein-Vazirani -----------------------------------------------------


@dataclass(frozen=True)
class BVOracle:
    """Hidden 4-bit string ``c``; ``c[0]`` belongs to X1."""

    c: str

    def __post_init__(self):
        c = str(self.c)
        if len(c) != 4 or set(c) - {"0", "1"}:
            raise ArgumentError(f"BV oracle must be a 4-bit string, got {self.c!r}")
        object.__setattr__(self, "c", c)

    @property
    def complement(self):
        return "".join("1" if b == "0" else "0" for b in self.c)


def all_bv_oracles():
    return [BVOracle(format(k, "04b")) for k in range(16)]


def build_bv_circuit(oracle):
    gates = [Ry(q, HALF_PI) for q in (1, 2, 3, 4)]
    gates.append(Ry(5, -HALF_PI))
    gates.extend(CNOT(i + 1, 5) for i, b in enumerate(oracle.c) if b == "1")
    gates.extend(Ry(q, HALF_PI) for q in range(1, 6))
    return Circuit(N_QUBITS, tuple(gates))


@dataclass
class BVResult:
    oracle: BVOracle
    measured: str
    p_correct: float
    histogram: Histogram = field(repr=False)

    def to_dict(self):
        return {
            "algo": "bv",
            "c": self.oracle.c,
            "expected": self.oracle.complement,
            "measured": self.measured,
            "p_correct": self.p_correct,
            "histogram": self.histogram.to_dict(),
        }


def run_bv(oracle, *, signs=None, noise=None, shots=0, seed=None, mitigate=False):
    """Run BV; the ideal outcome on X1..X4 is the bitwise complement of ``c``."""
    hist = execute(build_bv_circuit(oracle), signs=signs, noise=noise, shots=shots, seed=seed, mitigate=mitigate)
    x = marginal(hist, (1, 2, 3, 4)).frequencies()
    measured = format(int(np.argmax(x)), "04b")
    return BVResult(oracle, measured, float(x[int(oracle.complement, 2)]), hist)


# -- quantum Fourier transform ----------------------------------------------


def build_qft(n=N_QUBITS):
    """Coherent QFT without terminal swaps; read outputs bit-reversed."""
    if not 2 <= n <= 10:
        raise ArgumentError(f"QFT size must be in [2, 10], got {n}")
    gates = []
    for j in range(1, n + 1):
        gates.append(H(j))
        for k in range(j + 1, n + 1):
            gates.append(CP(k, j, 2 * math.pi / 2 ** (k - j + 1)))
    return Circuit(n, tuple(gates))


def bit_reverse_permutation(n):
    idx = np.arange(2**n)
    rev = np.zeros_like(idx)
    for b in range(n):
        rev |= ((idx >> b) & 1) << (n - 1 - b)
    return rev


def bit_reversed(hist):
    """Relabel outcomes with reversed qubit significance."""
    perm = bit_reverse_permutation(hist.n_qubits)
    entries = np.empty_like(hist.entries)
    entries[perm] = hist.entries
    return Histogram(hist.n_qubits, entries, hist.kind, hist.shots)


def dft_oracle(coeffs):
    """``|F c|**2`` with ``F[j, k] = exp(2 pi i j k / N) / sqrt(N)``, by direct summation."""
    c = np.asarray(coeffs, dtype=complex).reshape(-1)
    if abs(np.vdot(c, c).real - 1.0) > 1e-9:
        raise ArgumentError("dft_oracle needs a normalized coefficient vector")
    size = c.size
    out = np.empty(size)
    for j in range(size):
        acc = 0j
        for k in range(size):
            acc += np.exp(2j * math.pi * j * k / size) * c[k]
        out[j] = abs(acc) ** 2 / size
    return out


def _single_qubit_prep(q, a0, a1):
    """Standard gates taking |0> to ``a0|0> + a1|1>`` up to a global phase."""
    r0, r1 = abs(a0), abs(a1)
    norm = math.hypot(r0, r1)
    theta = 2 * math.atan2(r1, r0)
    gates = []
    if theta > 1e-15:
        gates.append(Ry(q, theta))
    if r0 / norm > 1e-12 and r1 / norm > 1e-12:
        rel = float(np.angle(a1) - np.angle(a0))
        rel = math.remainder(rel, 2 * math.pi)
        if abs(rel) > 1e-15:
            gates.append(Rz(q, rel))
    return gates


def prepare_product_state(factors):
    """Standard-gate prefix preparing ``⊗_q (a0|0> + a1|1>)``, qubit 1 first."""
    gates = []
    for q, (a0, a1) in enumerate(factors, 1):
        gates.extend(_single_qubit_prep(q, complex(a0), complex(a1)))
    return Circuit(len(factors), tuple(gates))


def phase_state_factors(phi, n=N_QUBITS):
    """Per-qubit factors of the state with ``C_k = exp(-i k phi) / sqrt(2**n)``.

    Qubit ``q`` carries weight ``2**(n - q)`` in ``k``, so its relative phase
    is ``-2**(n - q) * phi``.
    """
    return [(1.0, complex(np.exp(-1j * 2 ** (n - q) * phi))) for q in range(1, n + 1)]


def phase_coefficients(phi, n=N_QUBITS):
    k = np.arange(2**n)
    return np.exp(-1j * k * phi) / math.sqrt(2**n)


def prepare_phase_state(phi, n=N_QUBITS):
    """Preparation prefix for phase estimation: Ry(pi/2) then Rz on each qubit."""
    if not 0.0 <= phi < 2 * math.pi:
        raise ArgumentError(f"phi must lie in [0, 2pi), got {phi!r}")
    gates = []
    for q in range(1, n + 1):
        gates.append(Ry(q, HALF_PI))
        gates.append(Rz(q, -(2 ** (n - q)) * phi))
    return Circuit(n, tuple(gates))


@dataclass
class QFTResult:
    histogram: Histogram = field(repr=False)
    reference: np.ndarray = field(repr=False)
    peak_index: int
    p_peak: float
    sso: float
    detected_period: int | None = None

    def to_dict(self, **extra):
        d = {
            "histogram": self.histogram.to_dict(),
            "reference": [float(v) for v in self.reference],
            "peak_index": self.peak_index,
            "p_peak": self.p_peak,
            "sso": self.sso,
        }
        d.update(extra)
        return d


def _run_qft(prefix, reference, **kw):
    hist = bit_reversed(execute(prefix + build_qft(prefix.n_qubits), **kw))
    freq = hist.frequencies()
    peak = int(np.argmax(freq))
    sso = sso_fidelity(hist.normalized(), Histogram(hist.n_qubits, reference))
    return hist, freq, peak, sso


def run_phase_estimation(phi, *, signs=None, noise=None, shots=0, seed=None, mitigate=False):
    """Estimate ``phi`` to five bits; ideally peaks at ``32 phi / 2pi``."""
    reference = dft_oracle(phase_coefficients(phi))
    hist, freq, peak, sso = _run_qft(
        prepare_phase_state(phi), reference, signs=signs, noise=noise, shots=shots, seed=seed, mitigate=mitigate
    )
    return QFTResult(hist, reference, peak, float(freq[peak]), sso)


def phase_sweep(points=64, **kw):
    """Phase estimation at ``phi = 2 pi m / points``; each point gets a derived seed."""
    seed = kw.pop("seed", None)
    return [
        run_phase_estimation(2 * math.pi * m / points, seed=_derived_seed(seed, m), **kw)
        for m in range(points)
    ]


# -- period finding ---------------------------------------------------------


@dataclass(frozen=True)
class PeriodInput:
    """A period-finding input row: per-qubit factors, qubit 1 first."""

    period: int
    factors: tuple

    def coefficients(self):
        c = np.ones(1, dtype=complex)
        for a0, a1 in self.factors:
            f = np.array([a0, a1], dtype=complex)
            c = np.kron(c, f / np.linalg.norm(f))
        return c


_PLUS = (1.0, 1.0)
_ONE = (0.0, 1.0)

PERIOD_INPUTS = {
    1: PeriodInput(1, (_PLUS,) * 5),
    3: PeriodInput(3, (_PLUS,) * 3 + ((1.0, complex(np.exp(1j * 6.2 * math.pi / 16))), (1.0, 1j))),
    4: PeriodInput(4, (_PLUS,) * 3 + (_ONE,) * 2),
    8: PeriodInput(8, (_PLUS,) * 2 + (_ONE,) * 3),
    16: PeriodInput(16, (_PLUS,) + (_ONE,) * 4),
    32: PeriodInput(32, (_ONE,) * 5),
}


def detect_period(probs):
    """Number of dominant, equally weighted peaks in a QFT output.

    For each candidate count ``r`` the peak set is every outcome holding at
    least ``1 / (2 r)`` of the mass; ``r`` is consistent when that set has
    exactly ``r`` members. The period is ``N / mean circular spacing = r``.
    Returns None when zero or several candidates are consistent.
    """
    p = np.asarray(probs, dtype=float)
    p = p / p.sum()
    size = p.size
    consistent = [r for r in range(1, size + 1) if np.count_nonzero(p >= 1.0 / (2 * r) - 1e-12) == r]
    return consistent[0] if len(consistent) == 1 else None


def run_period_finding(row, *, signs=None, noise=None, shots=0, seed=None, mitigate=False):
    """QFT of a periodic input row; ``row`` is a :class:`PeriodInput` or its period."""
    if not isinstance(row, PeriodInput):
        try:
            row = PERIOD_INPUTS[int(row)]
        except (KeyError, ValueError):
            raise ArgumentError(f"no period-finding input for {row!r}; choose from {sorted(PERIOD_INPUTS)}") from None
    reference = dft_oracle(row.coefficients())
    hist, freq, peak, sso = _run_qft(
        prepare_product_state(row.factors), reference,
        signs=signs, noise=noise, shots=shots, seed=seed, mitigate=mitigate,
    )
    return QFTResult(hist, reference, peak, float(freq[peak]), sso, detect_period(freq))


# -- controlled-phase characterization --------------------------------------


@dataclass
class CPCurve:
    control: int
    target: int
    thetas: np.ndarray = field(repr=False)
    populations: np.ndarray = field(repr=False)

    @property
    def ideal(self):
        return 0.5 * (1.0 - np.sin(self.thetas))

    def to_dict(self):
        return {
            "algo": "cp-char",
            "pair": [self.control, self.target],
            "theta": [float(t) for t in self.thetas],
            "p1": [float(p) for p in self.populations],
            "ideal": [float(p) for p in self.ideal],
        }


def build_cp_characterization(control, target, theta, n=N_QUBITS):
    """Control in |1>, target in |+>, CP(theta), then Rx(pi/2) on the target."""
    if control == target:
        raise ArgumentError("control and target must differ")
    gates = (
        Rx(control, math.pi),
        Ry(target, HALF_PI),
        CP(control, target, theta),
        Rx(target, HALF_PI),
    )
    return Circuit(n, gates)


def cp_characterization(pair, thetas=None, *, signs=None, noise=None, shots=0, seed=None, mitigate=False):
    """P(target = 1) after the CP probe sequence, for each angle in ``thetas``.

    Ideally ``(1 - sin theta) / 2``. Default grid: 64 points over [-pi, pi].
    """
    control, target = pair
    thetas = np.linspace(-math.pi, math.pi, 64) if thetas is None else np.asarray(thetas, dtype=float)
    pops = np.empty(thetas.size)
    for k, theta in enumerate(thetas):
        circ = build_cp_characterization(control, target, float(theta))
        hist = execute(circ, signs=signs, noise=noise, shots=shots, seed=_derived_seed(seed, k), mitigate=mitigate)
        pops[k] = marginal(hist, (target,)).frequencies()[1]
    return CPCurve(control, target, thetas, pops)


def default_signs():
    return default_sign_table(N_QUBITS)
