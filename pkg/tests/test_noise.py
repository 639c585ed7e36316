import math

import numpy as np
import pytest

from ionforge.algorithms import DJOracle, run_dj
from ionforge.compiler import compile_circuit
from ionforge.errors import ArgumentError, IllConditionedError, NotCompiledError, SizeError
from ionforge.gates import CNOT, XX, Circuit, H, R, Rx, SignTable
from ionforge.noise import (
    PAULI_2Q,
    ConfusionMatrix,
    NoiseModel,
    build_confusion,
    coherent_trajectory,
    correct_readout,
    project_simplex,
    run_noisy,
)
from ionforge.statevector import Histogram, StateVector, apply_matrix, marginal, probabilities, sample, simulate

QUIET = dict(crosstalk=0.0, r01=0.0, r10=0.0)


def bell_compiled():
    return compile_circuit(Circuit(2, (H(1), CNOT(1, 2))), SignTable.uniform(2))


class TestNoiseModel:
    def test_defaults(self):
        m = NoiseModel()
        assert (m.crosstalk, m.r01, m.r10) == (0.04, 0.0026, 0.0091)

    def test_parse(self):
        m = NoiseModel.parse("p1=0.001, p2=0.02,ct=0.01,r01=0,r10=0.5")
        assert (m.p1, m.p2, m.crosstalk, m.r01, m.r10) == (0.001, 0.02, 0.01, 0.0, 0.5)
        assert NoiseModel.parse("ideal").is_ideal
        assert NoiseModel.parse("p2=0.1").crosstalk == 0.04

    def test_from_file(self, tmp_path):
        f = tmp_path / "noise.cfg"
        f.write_text("# model\np1=0.01\np2=0.03  # two-qubit\n")
        assert NoiseModel.from_file(f) == NoiseModel(p1=0.01, p2=0.03)

    @pytest.mark.parametrize("spec", ["p3=0.1", "p1", "p1=abc", "p1=2", "ct=0.2"])
    def test_parse_errors(self, spec):
        with pytest.raises(ArgumentError):
            NoiseModel.parse(spec)


class TestRunNoisy:
    def test_requires_compiled(self):
        with pytest.raises(NotCompiledError):
            run_noisy(Circuit(2, (H(1),)), NoiseModel(), 10, seed=0)

    def test_zero_noise_equals_ideal_sampling(self):
        c = compile_circuit(Circuit(3, (H(1), CNOT(1, 2), Rx(3, 0.4))), SignTable.uniform(3))
        ideal = sample(simulate(c.circuit), 5000, seed=21)
        noisy = run_noisy(c, NoiseModel.ideal(), 5000, seed=21)
        np.testing.assert_array_equal(ideal.entries, noisy.entries)

    def test_deterministic(self):
        m = NoiseModel(p1=0.05, p2=0.1)
        a = run_noisy(bell_compiled(), m, 3000, seed=5)
        b = run_noisy(bell_compiled(), m, 3000, seed=5)
        np.testing.assert_array_equal(a.entries, b.entries)

    def test_single_qubit_depolarizing(self):
        # identity gate followed by X, Y or Z with equal odds flips |0> two times in three
        c = Circuit(1, (R(1, 0.0, 0.0),), "native")
        h = run_noisy(c, NoiseModel(p1=1.0, **QUIET), 60_000, seed=2)
        p1 = h.entries[1] / h.shots
        assert abs(p1 - 2 / 3) < 5 * math.sqrt(2 / 9 / 60_000)

    def test_bell_pair_fully_depolarized(self):
        compiled = bell_compiled()
        gates = compiled.circuit.gates
        k = next(i for i, g in enumerate(gates) if isinstance(g, XX))
        # brute force: average over the 15 non-identity Paulis inserted after the XX gate
        pre = Circuit(2, gates[: k + 1], "native")
        post = Circuit(2, gates[k + 1:], "native")
        psi = simulate(pre).amplitudes
        correct = []
        for pauli in PAULI_2Q[1:]:
            amps = apply_matrix(psi, pauli, [0, 1], 2)
            p = probabilities(simulate(post, StateVector(2, amps))).entries
            correct.append(p[0] + p[3])
        oracle = float(np.mean(correct))
        assert oracle < 0.5
        shots = 100_000
        h = run_noisy(compiled, NoiseModel(p2=1.0, **QUIET), shots, seed=8)
        observed = (h.entries[0] + h.entries[3]) / shots
        assert observed < 0.5
        assert abs(observed - oracle) < 5 * math.sqrt(oracle * (1 - oracle) / shots)

    def test_readout_flip_rate(self):
        c = Circuit(2, (R(1, 0.0, 0.0),), "native")
        shots = 50_000
        h = run_noisy(c, NoiseModel(r01=0.1, r10=0.0, crosstalk=0.0), shots, seed=1)
        for q in (1, 2):
            rate = marginal(h, (q,)).entries[1] / shots
            assert abs(rate - 0.1) < 5 * math.sqrt(0.09 / shots)

    def test_crosstalk_locality(self):
        c = compile_circuit(Circuit(5, (Rx(3, math.pi / 2),)), SignTable.uniform(5))
        model = NoiseModel(crosstalk=0.08, r01=0, r10=0)
        probs = probabilities(coherent_trajectory(c, model))
        for q in (1, 5):
            assert marginal(probs, (q,)).entries[0] == pytest.approx(1.0, abs=1e-15)
        for q in (2, 4):
            assert marginal(probs, (q,)).entries[1] == pytest.approx(math.sin(0.08 * math.pi / 4) ** 2)
        sampled = run_noisy(c, model, 20_000, seed=3)
        for q in (1, 5):
            assert marginal(sampled, (q,)).entries[1] == 0

    def test_dj_success_drops_with_p2(self):
        o = DJOracle("balanced", (1, 2, 3))
        s = [run_dj(o, noise=NoiseModel(p2=p, **QUIET), shots=20_000, seed=6).success_probability
             for p in (0.0, 0.05)]
        assert s[0] == 1.0 and s[1] < 0.99

    def test_bad_shots(self):
        with pytest.raises(ArgumentError):
            run_noisy(bell_compiled(), NoiseModel(), 0, seed=0)


class TestConfusion:
    def test_zero_errors(self):
        np.testing.assert_array_equal(build_confusion((0, 0), 3).matrix, np.eye(8))

    def test_single_qubit_defaults(self):
        m = build_confusion((0.0026, 0.0091), 1).matrix
        np.testing.assert_allclose(m, [[0.9974, 0.0091], [0.0026, 0.9909]])

    def test_column_sums(self, rng):
        m = build_confusion(rng.uniform(0, 0.3, (4, 2)), 4).matrix
        np.testing.assert_allclose(m.sum(axis=0), 1, atol=1e-12)

    def test_tensor_order(self):
        # only qubit 1 misreads: true |00> is seen as |10> with probability 0.2
        m = build_confusion([(0.2, 0.0), (0.0, 0.0)], 2).matrix
        assert m[0b10, 0b00] == pytest.approx(0.2) and m[0b01, 0b00] == 0

    def test_csv_round_trip(self):
        m = build_confusion((0.01, 0.03), 2)
        back = ConfusionMatrix.from_csv(m.to_csv())
        np.testing.assert_allclose(back.matrix, m.matrix)

    def test_validation(self):
        with pytest.raises(ArgumentError):
            ConfusionMatrix(1, [[0.5, 0.5], [0.4, 0.5]])
        with pytest.raises(SizeError):
            ConfusionMatrix(2, np.eye(2))


class TestCorrectReadout:
    def test_identity(self, rng):
        p = rng.dirichlet(np.ones(8))
        out = correct_readout(Histogram(3, p), np.eye(8))
        np.testing.assert_allclose(out.entries, p, atol=1e-12)

    def test_exact_recovery(self, rng):
        p = rng.dirichlet(np.ones(32))
        m = build_confusion(rng.uniform(0, 0.05, (5, 2)), 5)
        np.testing.assert_allclose(correct_readout(m.apply(p), m).entries, p, atol=1e-8)

    def test_output_is_distribution(self, rng):
        # counts from a state with zeros: unconstrained inversion goes negative
        p = np.zeros(8)
        p[0] = 1.0
        m = build_confusion((0.05, 0.05), 3)
        counts = rng.multinomial(500, m.apply(p))
        out = correct_readout(Histogram(3, counts, "counts"), m).entries
        assert np.all(out >= 0) and out.sum() == pytest.approx(1.0)
        assert out[0] > 0.95

    def test_singular(self):
        with pytest.raises(IllConditionedError):
            correct_readout(Histogram(1, [0.5, 0.5]), build_confusion((0.5, 0.5), 1))

    def test_size_mismatch(self):
        with pytest.raises(SizeError):
            correct_readout(Histogram(1, [0.5, 0.5]), np.eye(4))


def test_project_simplex(rng):
    for _ in range(20):
        v = rng.normal(size=10)
        p = project_simplex(v)
        assert p.min() >= 0 and p.sum() == pytest.approx(1.0)
        # optimality: v - p is constant on the support
        support = p > 0
        assert np.ptp((v - p)[support]) < 1e-12
    q = rng.dirichlet(np.ones(6))
    np.testing.assert_allclose(project_simplex(q), q)


def test_standard_errors_identity_confusion():
    h = Histogram(2, [500, 300, 150, 50], "counts", 1000)
    f = np.array([0.5, 0.3, 0.15, 0.05])
    from ionforge.noise import readout_standard_errors

    np.testing.assert_allclose(readout_standard_errors(h, np.eye(4)), np.sqrt(f * (1 - f) / 1000))
    with pytest.raises(ArgumentError):
        readout_standard_errors(Histogram(2, f), np.eye(4))
