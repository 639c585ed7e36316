import warnings
from itertools import combinations

import numpy as np
import pytest

from ionforge.errors import CircuitValidationError, QubitIndexError, SignTableError
from ionforge.gates import (
    CNOT,
    CP,
    XX,
    Circuit,
    H,
    R,
    Rx,
    Ry,
    Rz,
    SignTable,
    default_sign_table,
    r_matrix,
    standard_matrix,
    xx_matrix,
)

from conftest import X, Y, Z, r_oracle, xx_oracle


def is_unitary(u, tol=1e-12):
    return np.allclose(u.conj().T @ u, np.eye(len(u)), atol=tol, rtol=0)


class TestRMatrix:
    def test_zero_angle_is_identity(self):
        for phi in (0, 0.3, np.pi, -2):
            np.testing.assert_allclose(r_matrix(0, phi), np.eye(2))

    def test_pi_about_x(self):
        np.testing.assert_allclose(r_matrix(np.pi, 0), -1j * X, atol=1e-15)

    def test_pi_about_y(self):
        np.testing.assert_allclose(r_matrix(np.pi, np.pi / 2), [[0, -1], [1, 0]], atol=1e-15)
        np.testing.assert_allclose(r_matrix(np.pi, np.pi / 2), -1j * Y, atol=1e-15)

    def test_matches_exponential(self, rng):
        for theta, phi in rng.uniform(-2 * np.pi, 2 * np.pi, (50, 2)):
            np.testing.assert_allclose(r_matrix(theta, phi), r_oracle(theta, phi), atol=1e-12)

    def test_inverse_and_unitary(self, rng):
        for theta, phi in rng.uniform(-2 * np.pi, 2 * np.pi, (100, 2)):
            u = r_matrix(theta, phi)
            assert is_unitary(u)
            np.testing.assert_allclose(u @ r_matrix(-theta, phi), np.eye(2), atol=1e-12)


class TestXXMatrix:
    def test_zero(self):
        np.testing.assert_allclose(xx_matrix(0), np.eye(4))

    def test_quarter(self):
        expected = np.array([[1, 0, 0, -1j], [0, 1, -1j, 0], [0, -1j, 1, 0], [-1j, 0, 0, 1]]) / np.sqrt(2)
        np.testing.assert_allclose(xx_matrix(np.pi / 4), expected, atol=1e-15)

    def test_sign_flip_inverts(self, rng):
        for chi in rng.uniform(-np.pi, np.pi, 20):
            np.testing.assert_allclose(xx_matrix(chi) @ xx_matrix(-chi), np.eye(4), atol=1e-12)

    def test_matches_exponential_symmetric(self, rng):
        swap = np.eye(4)[[0, 2, 1, 3]]
        for chi in rng.uniform(-np.pi, np.pi, 20):
            u = xx_matrix(chi)
            np.testing.assert_allclose(u, xx_oracle(chi), atol=1e-12)
            np.testing.assert_array_equal(u, u.T)
            np.testing.assert_allclose(swap @ u @ swap, u)
            assert is_unitary(u)


class TestStandardMatrix:
    def test_cp_zero(self):
        np.testing.assert_allclose(standard_matrix(CP(1, 2, 0.0)), np.eye(4))

    def test_cp_pi_is_cz(self):
        np.testing.assert_allclose(standard_matrix(CP(1, 2, np.pi)), np.diag([1, 1, 1, -1]), atol=1e-15)

    def test_cnot_10(self):
        np.testing.assert_array_equal(standard_matrix(CNOT(1, 2)) @ np.eye(4)[2], np.eye(4)[3])

    def test_rotations(self):
        t = 0.7
        np.testing.assert_allclose(standard_matrix(Rx(1, t)), r_matrix(t, 0))
        np.testing.assert_allclose(standard_matrix(Ry(1, t)), r_matrix(t, np.pi / 2))
        np.testing.assert_allclose(standard_matrix(Rz(1, t)), np.diag([np.exp(-0.35j), np.exp(0.35j)]))
        np.testing.assert_allclose(standard_matrix(H(1)), (X + Z) / np.sqrt(2), atol=1e-15)

    def test_all_unitary(self, rng):
        for g in (H(1), Rx(1, 1.1), Ry(1, -2.0), Rz(1, 0.4), CNOT(1, 2), CP(1, 2, 0.9)):
            assert is_unitary(standard_matrix(g))

    def test_native_rejected(self):
        with pytest.raises(TypeError):
            standard_matrix(R(1, 0.1, 0.2))


class TestSignTable:
    def test_listed_entries(self):
        t = default_sign_table(5)
        assert t[(1, 5)] == -1
        assert t[(5, 1)] == -1
        assert t[(1, 2)] == 1
        assert t[(2, 4)] == 1
        assert t[(2, 5)] == -1
        assert len(t) == 10
        assert sorted(v for _, v in t.items()).count(-1) == 3

    def test_other_sizes_warn(self):
        with pytest.warns(UserWarning):
            t = default_sign_table(4)
        assert t.assumed and len(t) == 6 and all(v == 1 for _, v in t.items())

    def test_incomplete_table_rejected(self):
        with pytest.raises(SignTableError):
            SignTable(3, {(1, 2): 1, (1, 3): -1})

    def test_bad_value_rejected(self):
        with pytest.raises(SignTableError):
            SignTable(2, {(1, 2): 0})

    def test_immutable(self):
        t = SignTable.uniform(3)
        with pytest.raises(AttributeError):
            t._signs = {}

    def test_text_round_trip(self):
        t = default_sign_table(5)
        assert SignTable.from_text(t.to_text()) == t

    def test_from_text_comments(self):
        t = SignTable.from_text("# pairs\n1 2 +1\n2 3 -1  # measured\n1 3 1\n")
        assert t[(3, 2)] == -1 and t.n_qubits == 3

    def test_from_text_errors(self):
        with pytest.raises(SignTableError):
            SignTable.from_text("1 2\n")
        with pytest.raises(SignTableError):
            SignTable.from_text("1 2 1\n2 1 -1\n")

    def test_missing_pair_lookup(self):
        with pytest.raises(SignTableError):
            SignTable.uniform(2)[(1, 3)]


class TestCircuit:
    def test_level_inference(self):
        assert Circuit(2, (H(1), CNOT(1, 2))).level == "standard"
        assert Circuit(2, (R(1, 0.1, 0), XX(2, 1, 0.2))).level == "native"
        assert Circuit(2).level == "standard"
        assert Circuit(2, (), "native").level == "native"

    def test_xx_canonical_pair(self):
        assert XX(3, 1, 0.1).qubits == (1, 3)

    def test_mixed_rejected(self):
        with pytest.raises(CircuitValidationError):
            Circuit(2, (H(1), R(1, 0.1, 0)))

    def test_level_tag_mismatch(self):
        with pytest.raises(CircuitValidationError):
            Circuit(2, (H(1),), "native")

    def test_index_range(self):
        with pytest.raises(QubitIndexError):
            Circuit(2, (CNOT(1, 3),))

    def test_same_qubit(self):
        with pytest.raises(CircuitValidationError):
            Circuit(2, (CNOT(2, 2),))

    def test_chi_bound(self):
        Circuit(2, (XX(1, 2, -np.pi / 4),))
        with pytest.raises(CircuitValidationError, match="pi/4"):
            Circuit(2, (XX(1, 2, np.pi / 3),))

    def test_concatenation(self):
        c = Circuit(2, (H(1),)) + Circuit(2, (CNOT(1, 2),))
        assert len(c) == 2 and c.count(CNOT) == 1
