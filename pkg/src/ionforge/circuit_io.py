"""Line-oriented circuit language.

::

    # comment
    qubits 5
    h 1
    cnot 1 2
    cp 1 2 pi/2
    r 3 pi/2 -pi/2
    xx 1 2 pi/4

Keywords are case-insensitive. Angles are decimal literals or multiples of
``pi`` such as ``pi/4``, ``-pi``, ``3pi/8`` or ``0.5*pi``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .compiler import CompiledCircuit
from .errors import (
    AngleSyntaxError,
    ArityError,
    ChiBoundError,
    DuplicateQubitError,
    MissingQubitsError,
    MixedLevelError,
    QubitCountError,
    QubitRangeError,
    UnknownKeywordError,
)
from .gates import CHI_MAX, CNOT, CP, XX, Circuit, H, R, Rx, Ry, Rz
from .statevector import MAX_QUBITS

# keyword -> (gate class, number of qubit operands, number of angle operands)
GRAMMAR = {
    "h": (H, 1, 0),
    "rx": (Rx, 1, 1),
    "ry": (Ry, 1, 1),
    "rz": (Rz, 1, 1),
    "cnot": (CNOT, 2, 0),
    "cp": (CP, 2, 1),
    "r": (R, 1, 2),
    "xx": (XX, 2, 1),
}
_KEYWORD_OF = {cls: kw for kw, (cls, _, _) in GRAMMAR.items()}

_PI_RE = re.compile(
    r"""^(?P<sign>[+-])?
        (?P<coef>(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)?
        \*?pi
        (/(?P<den>\d+(\.\d*)?))?$""",
    re.VERBOSE,
)
_FLOAT_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_MAX_PI_DENOMINATOR = 4096


def parse_angle(token):
    """Radians from a literal like ``0.25``, ``pi/4``, ``-3pi/8`` or ``2*pi``."""
    tok = token.strip().lower()
    if _FLOAT_RE.match(tok):
        return float(tok)
    m = _PI_RE.match(tok)
    if not m:
        raise ValueError(f"malformed angle {token!r}")
    value = math.pi
    if m.group("coef"):
        value *= float(m.group("coef"))
    if m.group("den"):
        den = float(m.group("den"))
        if den == 0:
            raise ValueError(f"zero denominator in angle {token!r}")
        value /= den
    return -value if m.group("sign") == "-" else value


def format_angle(x):
    """Exact ``pi`` fraction when one is within 1e-12, else 12 significant digits."""
    if x == 0:
        return "0"
    frac = Fraction(x / math.pi).limit_denominator(_MAX_PI_DENOMINATOR)
    if frac != 0 and abs(frac.numerator * math.pi / frac.denominator - x) <= 1e-12 * max(1.0, abs(x)):
        num, den = frac.numerator, frac.denominator
        sign = "-" if num < 0 else ""
        num = abs(num)
        body = "pi" if num == 1 else f"{num}pi"
        return sign + body + ("" if den == 1 else f"/{den}")
    return f"{x:.12g}"


@dataclass(frozen=True)
class CircuitDocument:
    """Parsed circuit with the source position of each gate statement."""

    circuit: Circuit
    locations: tuple  # (line, column) per gate

    @property
    def n_qubits(self):
        return self.circuit.n_qubits


def _tokens(line):
    """Yield ``(token, column)`` pairs, columns 1-based."""
    for m in re.finditer(r"\S+", line):
        yield m.group(0), m.start() + 1


def parse_circuit(text):
    """Parse DSL text into a :class:`CircuitDocument`."""
    n_qubits = None
    gates = []
    locations = []
    level = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = list(_tokens(line))
        if not toks:
            continue
        (kw, kw_col), args = toks[0], toks[1:]
        kw = kw.lower()
        if n_qubits is None:
            if kw != "qubits":
                raise MissingQubitsError("first statement must be 'qubits N'", lineno, kw_col)
            if len(args) != 1:
                raise ArityError("'qubits' takes exactly one argument", lineno, kw_col)
            tok, col = args[0]
            try:
                n_qubits = int(tok)
            except ValueError:
                raise QubitCountError(f"qubit count {tok!r} is not an integer", lineno, col) from None
            if not 1 <= n_qubits <= MAX_QUBITS:
                raise QubitCountError(f"qubit count must be in [1, {MAX_QUBITS}], got {n_qubits}", lineno, col)
            continue
        if kw == "qubits":
            raise QubitCountError("'qubits' may only appear once", lineno, kw_col)
        if kw not in GRAMMAR:
            raise UnknownKeywordError(f"unknown keyword {kw!r}", lineno, kw_col)
        cls, n_q, n_a = GRAMMAR[kw]
        if len(args) != n_q + n_a:
            raise ArityError(f"'{kw}' takes {n_q} qubit(s) and {n_a} angle(s), got {len(args)} operand(s)", lineno, kw_col)
        qubits = []
        for tok, col in args[:n_q]:
            try:
                q = int(tok)
            except ValueError:
                raise QubitRangeError(f"qubit index {tok!r} is not an integer", lineno, col) from None
            if not 1 <= q <= n_qubits:
                raise QubitRangeError(f"qubit index {q} outside 1..{n_qubits}", lineno, col)
            qubits.append(q)
        if n_q == 2 and qubits[0] == qubits[1]:
            raise DuplicateQubitError(f"'{kw}' needs two distinct qubits", lineno, args[1][1])
        angles = []
        for tok, col in args[n_q:]:
            try:
                angles.append(parse_angle(tok))
            except ValueError as exc:
                raise AngleSyntaxError(str(exc), lineno, col) from None
        if cls is XX and abs(angles[0]) > CHI_MAX + 1e-12:
            raise ChiBoundError("|chi| exceeds the calibrated maximum pi/4", lineno, args[2][1])
        native = cls in (R, XX)
        this_level = "native" if native else "standard"
        if level is None:
            level = this_level
        elif level != this_level:
            raise MixedLevelError(f"'{kw}' is a {this_level} gate but the circuit is {level}", lineno, kw_col)
        gates.append(cls(*qubits, *angles))
        locations.append((lineno, kw_col))
    if n_qubits is None:
        raise MissingQubitsError("missing 'qubits N' declaration", 1, 1)
    return CircuitDocument(Circuit(n_qubits, tuple(gates), level), tuple(locations))


def _operands(gate):
    if isinstance(gate, XX):
        return [gate.i, gate.j], [gate.chi]
    if isinstance(gate, R):
        return [gate.q], [gate.theta, gate.phi]
    if isinstance(gate, (CNOT, CP)):
        return [gate.control, gate.target], ([gate.beta] if isinstance(gate, CP) else [])
    if isinstance(gate, H):
        return [gate.q], []
    return [gate.q], [gate.theta]


def serialize_circuit(circuit):
    """Canonical DSL text; ``parse_circuit`` of the result reproduces the circuit."""
    if isinstance(circuit, (CircuitDocument, CompiledCircuit)):
        circuit = circuit.circuit
    lines = [f"qubits {circuit.n_qubits}"]
    for g in circuit.gates:
        qs, angles = _operands(g)
        parts = [_KEYWORD_OF[type(g)], *map(str, qs), *map(format_angle, angles)]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def native_listing(compiled):
    """Native gates one per line (``R q theta phi`` / ``XX i j chi``), 12 significant digits."""
    circuit = compiled.circuit if isinstance(compiled, CompiledCircuit) else compiled
    lines = [f"qubits {circuit.n_qubits}"]
    for g in circuit.gates:
        if isinstance(g, R):
            lines.append(f"R {g.q} {g.theta:.12g} {g.phi:.12g}")
        elif isinstance(g, XX):
            lines.append(f"XX {g.i} {g.j} {g.chi:.12g}")
        else:
            raise TypeError(f"{g!r} is not a native gate")
    return "\n".join(lines) + "\n"


def circuits_equal(a, b, tol=1e-11):
    """Structural equality with angles compared to a relative tolerance."""
    if a.n_qubits != b.n_qubits or len(a.gates) != len(b.gates):
        return False
    for ga, gb in zip(a.gates, b.gates):
        if type(ga) is not type(gb):
            return False
        qa, aa = _operands(ga)
        qb, ab = _operands(gb)
        if qa != qb or any(abs(x - y) > tol * max(1.0, abs(x)) for x, y in zip(aa, ab)):
            return False
    return True
