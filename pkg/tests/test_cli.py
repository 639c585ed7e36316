import json
import math
import subprocess
import sys

import pytest

from ionforge.algorithms import build_qft
from ionforge.circuit_io import parse_circuit, serialize_circuit
from ionforge.cli import main
from ionforge.statevector import Histogram


@pytest.fixture
def qft5(tmp_path):
    path = tmp_path / "qft5.circ"
    path.write_text(serialize_circuit(build_qft(5)))
    return path


@pytest.fixture
def bell(tmp_path):
    path = tmp_path / "bell.circ"
    path.write_text("qubits 2\nh 1\ncnot 1 2\n")
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_run_bv_exact(capsys):
    code, out, _ = run(capsys, "run", "--algo", "bv", "--c", "0101", "--shots", "0")
    assert code == 0
    payload = json.loads(out)
    assert payload["measured"] == "1010" and payload["p_correct"] == pytest.approx(1.0, abs=1e-12)
    hist = Histogram.from_json(json.dumps(payload["histogram"]))
    data = sum(p for k, p in enumerate(hist.entries) if k >> 1 == 0b1010)
    assert data == pytest.approx(1.0, abs=1e-12)


def test_compile_counts(capsys, qft5, tmp_path):
    code, out, err = run(capsys, "compile", qft5)
    assert code == 0
    assert json.loads(err) == {"n_qubits": 5, "r": 70, "total": 80, "xx": 10}
    listing = parse_circuit(out.lower()).circuit
    assert listing.level == "native" and len(listing.gates) == 80

    out_path, report = tmp_path / "qft5.native", tmp_path / "report.json"
    code, out, _ = run(capsys, "compile", qft5, "-o", out_path, "--report", report)
    assert code == 0 and out == ""
    assert json.loads(report.read_text())["xx"] == 10
    assert out_path.read_text().startswith("qubits 5\n")


def test_estimate(capsys):
    code, out, _ = run(capsys, "estimate", "--n", "5")
    payload = json.loads(out)
    assert code == 0 and payload["tau_g"] == 235.0 and payload["linear_crystal"] is True
    assert payload["calibrations"] == {"r_calibrations": 5, "xx_pulse_solutions": 10}


def test_simulate_exact_and_sampled(capsys, bell, tmp_path):
    code, out, _ = run(capsys, "simulate", bell)
    assert code == 0
    hist = Histogram.from_json(out)
    assert hist.entries == pytest.approx([0.5, 0, 0, 0.5], abs=1e-12)

    csv_path = tmp_path / "bell.csv"
    code, _, _ = run(capsys, "simulate", bell, "--shots", "1000", "--seed", "4", "--output", "csv", "-o", csv_path)
    counts = Histogram.from_csv(csv_path.read_text())
    assert code == 0 and counts.kind == "counts" and counts.shots == 1000
    assert counts.entries[1] == counts.entries[2] == 0


def test_simulate_native(capsys, tmp_path):
    path = tmp_path / "n.circ"
    path.write_text("qubits 1\nr 1 pi 0\n")
    code, out, _ = run(capsys, "simulate", path)
    assert code == 0 and Histogram.from_json(out).entries[1] == pytest.approx(1.0)


def test_noisy_run_and_mitigation(capsys):
    base = ["run", "--algo", "dj", "--oracle", "balanced:2", "--shots", "4000", "--seed", "3"]
    code, out, _ = run(capsys, *base, "--noise", "p2=0.02")
    assert code == 0 and 0.8 < json.loads(out)["success_probability"] < 1.0
    code, out, _ = run(capsys, *base, "--noise", "p2=0.02", "--mitigate")
    assert code == 0 and json.loads(out)["histogram"]["kind"] == "probability"


def test_noise_file(capsys, tmp_path):
    cfg = tmp_path / "noise.cfg"
    cfg.write_text("p1=0\np2=0\nct=0\nr01=0\nr10=0\n")
    code, out, _ = run(capsys, "run", "--algo", "bv", "--c", "1111", "--shots", "500", "--noise", cfg)
    assert code == 0 and json.loads(out)["p_correct"] == 1.0


@pytest.mark.parametrize("argv", [
    ["run", "--algo", "qft-phase", "--phi", "5pi/16"],
    ["run", "--algo", "qft-period", "--period-row", "8"],
    ["run", "--algo", "cp-char", "--pair", "2,4", "--points", "9"],
    ["characterize", "--pair", "1,5", "--points", "5", "--output", "csv"],
])
def test_other_experiments(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out


def test_phase_estimation_output(capsys):
    _, out, _ = run(capsys, "run", "--algo", "qft-phase", "--phi", "5pi/16")
    payload = json.loads(out)
    assert payload["peak_index"] == 5 and payload["p_peak"] == pytest.approx(1.0, abs=1e-9)


def test_period_output(capsys):
    _, out, _ = run(capsys, "run", "--algo", "qft-period", "--period-row", "3")
    assert json.loads(out)["detected_period"] == 3


def test_deterministic_bytes(capsys):
    argv = ["run", "--algo", "dj", "--oracle", "balanced:123", "--shots", "2000", "--noise", "p2=0.05", "--seed", "9"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_seed_from_environment(capsys, monkeypatch):
    argv = ["run", "--algo", "dj", "--oracle", "balanced:1", "--shots", "300", "--noise", "p2=0.2"]
    _, explicit, _ = run(capsys, *argv, "--seed", "77")
    monkeypatch.setenv("IONFORGE_SEED", "77")
    _, env, _ = run(capsys, *argv)
    monkeypatch.setenv("IONFORGE_SEED", "78")
    _, other, _ = run(capsys, *argv)
    assert explicit == env != other
    monkeypatch.setenv("IONFORGE_SEED", "x")
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error[E005]:")


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["run"],
    ["run", "--algo", "nope"],
    ["estimate"],
    ["run", "--algo", "qft-phase", "--phi", "pi/x"],
    ["run", "--algo", "cp-char", "--pair", "1"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == ""
    assert err.startswith("error[E200]:")


def test_validation_errors_have_distinct_codes(capsys, tmp_path):
    bad_dsl = tmp_path / "bad.circ"
    bad_dsl.write_text("qubits 2\ncnot 1 3\n")
    cases = [
        ["simulate", tmp_path / "missing.circ"],
        ["simulate", bad_dsl],
        ["run", "--algo", "dj", "--oracle", "balanced:9"],
        ["run", "--algo", "dj", "--noise", "p2=0.1"],
        ["estimate", "--n", "1"],
    ]
    codes = []
    for argv in cases:
        code, out, err = run(capsys, *argv)
        assert code == 2 and out == "", argv
        assert err.startswith("error[E")
        codes.append(err[len("error["):err.index("]")])
    assert codes[0] == "E201" and codes[1] == "E103"
    assert len(set(codes[:2])) == 2


def test_failed_run_leaves_no_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, _, _ = run(capsys, "run", "--algo", "dj", "--oracle", "balanced:9", "-o", target)
    assert code == 2 and not target.exists()
    assert list(tmp_path.iterdir()) == []


def test_existing_file_untouched_on_failure(capsys, tmp_path):
    target = tmp_path / "out.json"
    target.write_text("previous\n")
    run(capsys, "estimate", "--n", "0", "-o", target)
    assert target.read_text() == "previous\n"


def test_help_documents_environment():
    proc = subprocess.run([sys.executable, "-m", "ionforge", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "IONFORGE_SEED" in proc.stdout


def test_entry_point_exit_code():
    proc = subprocess.run([sys.executable, "-m", "ionforge", "estimate", "--n", "10"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["tau_g"] == pytest.approx(235 * 2**1.7)
    assert math.isfinite(json.loads(proc.stdout)["nu_z"])
