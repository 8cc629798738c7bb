from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mpstop.enp import EnpParams, sample_enp
from mpstop.linalg import (
    ConstantRowError,
    NotPSDError,
    NotSymmetricError,
    ZeroRowError,
    centered_covariance,
    noncentered_correlation,
    sample_correlation,
    sample_covariance,
    symmetric_eigenvalues,
)


def exact_det(M):
    """Leibniz expansion in rationals; fine for p <= 6."""
    A = [[Fraction(v) for v in row] for row in M]
    p = len(A)
    total = Fraction(0)
    for perm in permutations(range(p)):
        inv = sum(1 for i in range(p) for j in range(i + 1, p) if perm[i] > perm[j])
        term = Fraction(-1 if inv % 2 else 1)
        for i, j in enumerate(perm):
            term *= A[i][j]
        total += term
    return float(total)


def equicorrelation(p, rho):
    return (1 - rho) * np.eye(p) + rho * np.ones((p, p))


data = arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(2, 12)),
              elements=st.floats(-1e3, 1e3))


class TestCovariance:
    def test_all_ones(self):
        assert np.array_equal(sample_covariance(np.ones((2, 4))), np.ones((2, 2)))

    def test_orthogonal_rows(self):
        X = np.array([[1, 1, 1, 1], [1, -1, 1, -1]], dtype=float)
        assert np.array_equal(sample_covariance(X), np.eye(2))

    def test_trace_identity(self, rng):
        X = rng.standard_normal((30, 50))
        S = sample_covariance(X)
        assert np.trace(S) / 30 == pytest.approx(np.sum(X**2) / (30 * 50), rel=1e-12)

    def test_centered_constant_rows(self):
        X = np.array([[2.0] * 5, [-1.0] * 5])
        assert np.allclose(centered_covariance(X), 0.0, atol=1e-15)

    def test_centered_shift_invariance(self, rng):
        X = rng.standard_normal((6, 40))
        shifted = X + rng.uniform(-50, 50, size=(6, 1))
        assert np.allclose(centered_covariance(X), centered_covariance(shifted), atol=1e-12)

    def test_centered_equals_covariance_of_residuals(self, rng):
        X = rng.standard_normal((5, 20))
        assert np.array_equal(centered_covariance(X), sample_covariance(X - X.mean(axis=1, keepdims=True)))

    @pytest.mark.parametrize("bad", [np.ones(5), np.ones((3, 1)), np.array([[1.0, np.nan]])])
    def test_rejects_bad_shapes(self, bad):
        with pytest.raises(ValueError):
            sample_covariance(bad)


class TestCorrelation:
    def test_identical_rows(self):
        x = np.array([1.0, 4.0, 2.0, 8.0])
        assert sample_correlation(np.vstack([x, x]))[0, 1] == pytest.approx(1.0)

    def test_opposite_rows(self):
        x = np.array([1.0, 4.0, 2.0, 8.0])
        assert sample_correlation(np.vstack([x, -x]))[0, 1] == pytest.approx(-1.0)

    def test_unit_diagonal_and_trace(self, rng):
        R = sample_correlation(rng.standard_normal((8, 15)) * 100 + 3)
        assert np.all(np.diag(R) == 1.0)
        assert np.trace(R) == 8.0

    def test_constant_row_names_the_row(self):
        X = np.array([[1.0, 2.0, 3.0], [5.0, 5.0, 5.0], [1.0, 0.0, 1.0]])
        with pytest.raises(ConstantRowError) as info:
            sample_correlation(X)
        assert info.value.row == 1

    def test_zero_row(self):
        with pytest.raises(ZeroRowError) as info:
            noncentered_correlation(np.array([[1.0, 2.0], [0.0, 0.0]]))
        assert info.value.row == 1

    def test_affine_invariance(self, rng):
        X = rng.standard_normal((6, 40))
        a = rng.uniform(0.1, 10, size=(6, 1))
        b = rng.uniform(-5, 5, size=(6, 1))
        assert np.allclose(sample_correlation(X), sample_correlation(a * X + b), atol=1e-12)

    def test_population_correlation(self):
        X = sample_enp(EnpParams(p=5, n=20000, rho=0.4, seed=3))
        R = sample_correlation(X)
        off = R[~np.eye(5, dtype=bool)]
        assert np.all(np.abs(off - 0.4) <= 3 / np.sqrt(20000))

    def test_noncentered_unit_diagonal(self, rng):
        R = noncentered_correlation(rng.standard_normal((4, 9)) + 2)
        assert np.all(np.diag(R) == 1.0)

    def test_noncentered_equals_centered_for_zero_mean_rows(self):
        X = np.array([[1.0, -1.0, 2.0, -2.0], [3.0, 0.0, -1.0, -2.0]])
        assert np.allclose(noncentered_correlation(X), sample_correlation(X), atol=1e-15)

    def test_noncentered_spot_value(self, rng):
        X = rng.standard_normal((3, 7))
        expected = X[0] @ X[2] / np.sqrt((X[0] @ X[0]) * (X[2] @ X[2]))
        assert noncentered_correlation(X)[0, 2] == pytest.approx(expected, rel=1e-12)

    @given(data)
    def test_constructors_psd_and_deterministic(self, X):
        for build in (sample_covariance, centered_covariance):
            M = build(X)
            assert np.array_equal(M, build(X.copy()))
            symmetric_eigenvalues((M + M.T) / 2)


class TestEigenvalues:
    def test_identity(self):
        assert list(symmetric_eigenvalues(np.eye(3)).eigenvalues) == [1.0, 1.0, 1.0]

    def test_equicorrelation(self):
        lam = symmetric_eigenvalues(equicorrelation(100, 0.5)).eigenvalues
        assert lam[0] == pytest.approx(50.5, rel=1e-12)
        assert np.allclose(lam[1:], 0.5, rtol=1e-10)

    @pytest.mark.parametrize("p", [2, 3, 4, 5, 6])
    def test_trace_and_determinant(self, rng, p):
        A = rng.standard_normal((p, p + 2))
        M = A @ A.T
        M = (M + M.T) / 2
        lam = symmetric_eigenvalues(M).eigenvalues
        assert lam.sum() == pytest.approx(np.trace(M), rel=1e-10)
        assert np.prod(lam) == pytest.approx(exact_det(M), rel=1e-8)

    def test_descending(self, rng):
        A = rng.standard_normal((10, 10))
        lam = symmetric_eigenvalues(A @ A.T).eigenvalues
        assert np.all(np.diff(lam) <= 0)

    def test_residual_contract(self, rng):
        A = rng.standard_normal((40, 60))
        M = A @ A.T / 60
        lam = symmetric_eigenvalues(M).eigenvalues
        w, V = np.linalg.eigh(M)
        norm = np.linalg.norm(M, 2)
        for val, v in zip(lam, V[:, ::-1].T):
            assert np.linalg.norm(M @ v - val * v) <= 1e-8 * norm

    def test_round_off_negatives_clamped(self):
        x = np.array([1.0, 2.0, 3.0])
        lam = symmetric_eigenvalues(np.outer(x, x)).eigenvalues
        assert np.all(lam >= 0)
        assert lam[1] == 0.0 or lam[1] < 1e-12

    def test_rejects_asymmetric(self):
        with pytest.raises(NotSymmetricError):
            symmetric_eigenvalues(np.array([[1.0, 0.5], [0.4, 1.0]]))

    def test_rejects_indefinite(self):
        with pytest.raises(NotPSDError):
            symmetric_eigenvalues(np.array([[0.0, 1.0], [1.0, 0.0]]))
