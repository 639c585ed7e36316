"""Command line front-end.

Subcommands: ``simulate``, ``compile``, ``run``, ``characterize``,
``estimate``. Exit status is 0 on success, 1 on usage errors and 2 on
validation errors; every error is printed to standard error as
``error[CODE]: message``.

The seed defaults to the ``IONFORGE_SEED`` environment variable, then 0.
Histograms use bit order X1-msb: qubit 1 is the most significant bit.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .algorithms import (
    PERIOD_INPUTS,
    BVOracle,
    DJOracle,
    cp_characterization,
    execute,
    run_bv,
    run_dj,
    run_period_finding,
    run_phase_estimation,
)
from .circuit_io import native_listing, parse_angle, parse_circuit
from .compiler import compile_circuit
from .errors import ArgumentError, IonForgeError
from .gates import SignTable, default_sign_table
from .noise import NoiseModel
from .resources import TrapConfig, plan

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION = 0, 1, 2


class UsageError(Exception):
    code = "E200"


class FileAccessError(IonForgeError):
    code = "E201"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dump_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write_output(text, path):
    """Write all of ``text`` at once; a failure never leaves a partial file."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent if str(target.parent) else ".", prefix=".ionforge-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileAccessError(f"cannot read {path}: {exc.strerror}") from None


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("IONFORGE_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ArgumentError(f"IONFORGE_SEED must be an integer, got {env!r}") from None


def _noise(args):
    if args.noise is None:
        return None
    if os.path.isfile(args.noise):
        return NoiseModel.from_file(args.noise)
    return NoiseModel.parse(args.noise)


def _signs(args, n):
    if args.signs is None:
        return default_sign_table(n) if n == 5 else SignTable.uniform(n)
    return SignTable.from_text(_read(args.signs), n)


def _pair(text):
    try:
        a, b = (int(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a pair like '1,2', got {text!r}") from None
    return a, b


def _angle(text):
    try:
        return parse_angle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _exec_options(p):
    p.add_argument("--shots", type=int, default=0, help="number of shots; 0 = exact probabilities (default)")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default: $IONFORGE_SEED, else 0)")
    p.add_argument("--noise", default=None,
                   help="noise model 'p1=..,p2=..,ct=..,r01=..,r10=..' or a file with one key=value per line")
    p.add_argument("--mitigate", action="store_true", help="apply readout correction to noisy counts")
    p.add_argument("--signs", default=None, help="Ising sign table file, lines 'i j +1|-1'")
    p.add_argument("--output", choices=("json", "csv"), default="json", help="output format")
    p.add_argument("-o", "--out", default=None, help="output path (default: stdout)")


_EPILOG = """\
files:
  .circ        circuit DSL ('qubits N' then h/rx/ry/rz/cnot/cp or r/xx lines)
  .json, .csv  histograms and reports; bit order X1-msb (qubit 1 is the MSB)

environment:
  IONFORGE_SEED  seed used when --seed is not given (default 0)

exit status:
  0 success, 1 usage error, 2 validation error; errors print 'error[CODE]: message'
"""


def build_parser():
    parser = _Parser(prog="ionforge", description="Trapped-ion circuit compiler and simulator.",
                     epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"ionforge {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("simulate", help="simulate a .circ file and emit a histogram")
    p.add_argument("circuit", help="circuit file in the ionforge DSL")
    _exec_options(p)

    p = sub.add_parser("compile", help="compile a .circ file to native R/XX gates")
    p.add_argument("circuit")
    p.add_argument("--signs", default=None, help="Ising sign table file")
    p.add_argument("-o", "--out", default=None, help="native listing path (default: stdout)")
    p.add_argument("--report", default=None,
                   help="JSON gate-count report path (default: stdout when -o is given, else stderr)")

    p = sub.add_parser("run", help="run one of the benchmark experiments")
    p.add_argument("--algo", required=True, choices=("dj", "bv", "qft-period", "qft-phase", "cp-char"))
    p.add_argument("--oracle", default="constant0",
                   help="DJ oracle: constant0, constant1 or balanced:<subset> e.g. balanced:13")
    p.add_argument("--c", default="0101", help="BV hidden string (4 bits, X1 first)")
    p.add_argument("--phi", type=_angle, default=0.0, help="phase for qft-phase, e.g. 5pi/16")
    p.add_argument("--period-row", type=int, default=4, choices=sorted(PERIOD_INPUTS))
    p.add_argument("--pair", type=_pair, default=(1, 2), help="control,target for cp-char")
    p.add_argument("--points", type=int, default=64, help="theta grid size for cp-char")
    _exec_options(p)

    p = sub.add_parser("characterize", help="controlled-phase sweep on one ion pair")
    p.add_argument("--pair", type=_pair, default=(1, 2))
    p.add_argument("--points", type=int, default=64)
    _exec_options(p)

    p = sub.add_parser("estimate", help="resource estimate for an n-ion chain")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--nu-x", type=float, default=3.07, help="transverse frequency in MHz")
    p.add_argument("--nu-z", type=float, default=0.27, help="reference axial frequency in MHz")
    p.add_argument("--tau-ref", type=float, default=235.0, help="reference XX duration in us")
    p.add_argument("--n-ref", type=int, default=5)
    p.add_argument("-o", "--out", default=None)
    return parser


def _hist_output(hist, payload, args):
    if args.output == "csv":
        return hist.to_csv()
    return _dump_json(payload)


def _cmd_simulate(args):
    doc = parse_circuit(_read(args.circuit))
    circuit = doc.circuit
    noise = _noise(args)
    if circuit.level == "native":
        from .noise import run_noisy
        from .statevector import probabilities, sample, simulate

        if noise is not None:
            if args.shots < 1:
                raise ArgumentError("a noise model needs --shots > 0")
            hist = run_noisy(circuit, noise, args.shots, _seed(args))
        else:
            state = simulate(circuit)
            hist = probabilities(state) if args.shots == 0 else sample(state, args.shots, _seed(args))
    else:
        hist = execute(circuit, signs=_signs(args, circuit.n_qubits), noise=noise,
                       shots=args.shots, seed=_seed(args), mitigate=args.mitigate)
    return _hist_output(hist, hist.to_dict(), args)


def _cmd_compile(args):
    doc = parse_circuit(_read(args.circuit))
    if doc.circuit.level == "native":
        raise ArgumentError("circuit is already native")
    compiled = compile_circuit(doc.circuit, _signs(args, doc.n_qubits))
    listing = native_listing(compiled)
    report = _dump_json({"r": compiled.n_r, "xx": compiled.n_xx, "total": compiled.total,
                         "n_qubits": compiled.n_qubits})
    _write_output(listing, args.out)
    if args.report:
        _write_output(report, args.report)
    elif args.out not in (None, "-"):
        sys.stdout.write(report)
    else:
        sys.stderr.write(report)
    return None


def _run_kwargs(args):
    return dict(signs=_signs(args, 5), noise=_noise(args), shots=args.shots,
                seed=_seed(args), mitigate=args.mitigate)


def _cmd_run(args):
    kw = _run_kwargs(args)
    if args.algo == "dj":
        res = run_dj(DJOracle.parse(args.oracle), **kw)
        return _hist_output(res.histogram, res.to_dict(), args)
    if args.algo == "bv":
        res = run_bv(BVOracle(args.c), **kw)
        return _hist_output(res.histogram, res.to_dict(), args)
    if args.algo == "qft-phase":
        phi = args.phi
        if not 0 <= phi < 2 * math.pi:
            raise ArgumentError("--phi must lie in [0, 2pi)")
        res = run_phase_estimation(phi, **kw)
        payload = res.to_dict(algo="qft-phase", phi=phi, bit_order="X1-msb, bit-reversed QFT readout applied")
        return _hist_output(res.histogram, payload, args)
    if args.algo == "qft-period":
        res = run_period_finding(args.period_row, **kw)
        payload = res.to_dict(algo="qft-period", period_row=args.period_row, detected_period=res.detected_period)
        return _hist_output(res.histogram, payload, args)
    return _characterize(args, kw)


def _characterize(args, kw):
    import numpy as np

    if args.points < 1:
        raise ArgumentError("--points must be positive")
    thetas = np.linspace(-math.pi, math.pi, args.points)
    curve = cp_characterization(args.pair, thetas, **kw)
    if args.output == "csv":
        lines = [f"# cp characterization control={curve.control} target={curve.target}", "theta,p1,ideal"]
        lines += [f"{t!r},{p!r},{i!r}" for t, p, i in zip(map(float, curve.thetas), map(float, curve.populations),
                                                           map(float, curve.ideal))]
        return "\n".join(lines) + "\n"
    return _dump_json(curve.to_dict())


def _cmd_characterize(args):
    return _characterize(args, _run_kwargs(args))


def _cmd_estimate(args):
    cfg = TrapConfig(nu_x=args.nu_x, nu_z=args.nu_z, tau_ref=args.tau_ref, n_ref=args.n_ref)
    return _dump_json(plan(args.n, cfg))


COMMANDS = {
    "simulate": _cmd_simulate,
    "compile": _cmd_compile,
    "run": _cmd_run,
    "characterize": _cmd_characterize,
    "estimate": _cmd_estimate,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text = COMMANDS[args.command](args)
        if text is not None:
            _write_output(text, getattr(args, "out", None))
    except UsageError as exc:
        sys.stderr.write(f"error[{exc.code}]: {exc}\n")
        sys.stderr.write(parser.format_usage())
        return EXIT_USAGE
    except IonForgeError as exc:
        sys.stderr.write(f"error[{exc.code}]: {exc}\n")
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
