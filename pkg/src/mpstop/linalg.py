"""Sample covariance and correlation matrices from a p x n data matrix.

Rows are variables and columns are observations throughout. The
eigenvalues come from LAPACK's symmetric driver (``numpy.linalg.eigvalsh``).
"""
from __future__ import annotations

import numpy as np

from .spectral import Spectrum

#: round-off negatives above ``-PSD_TOL * lambda_1`` are clamped to zero
PSD_TOL = 1e-10
SYM_TOL = 1e-12


class DegenerateRowError(ValueError):
    """A row has zero norm (after centering, for the centered correlation)."""

    def __init__(self, row, message):
        super().__init__(message)
        self.row = row


class ConstantRowError(DegenerateRowError):
    pass


class ZeroRowError(DegenerateRowError):
    pass


class NotSymmetricError(ValueError):
    pass


class NotPSDError(ValueError):
    pass


def as_data_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"data matrix must be 2-d, got shape {X.shape}")
    p, n = X.shape
    if p < 1 or n < 2:
        raise ValueError(f"need p >= 1 variables and n >= 2 observations, got {p} x {n}")
    if not np.all(np.isfinite(X)):
        raise ValueError("data matrix has non-finite entries")
    return X


def sample_covariance(X) -> np.ndarray:
    """``S = X X^T / n`` (no centering)."""
    X = as_data_matrix(X)
    return X @ X.T / X.shape[1]


def centered_covariance(X) -> np.ndarray:
    """``E E^T`` with ``E = (X - row means) / sqrt(n)``."""
    X = as_data_matrix(X)
    return sample_covariance(X - X.mean(axis=1, keepdims=True))


def _normalize_rows(Z, bad, error_cls, what):
    if bad.size:
        i = int(bad[0])
        raise error_cls(i, f"row {i} is {what}; its correlation is undefined")
    norms = np.sqrt(np.einsum("ij,ij->i", Z, Z))
    return Z / norms[:, None]


def sample_correlation(X) -> np.ndarray:
    """Pearson correlation matrix ``R = Y Y^T`` of the rows of ``X``."""
    X = as_data_matrix(X)
    # test constancy on the raw rows: centering a constant row can leave round-off
    bad = np.flatnonzero(np.ptp(X, axis=1) == 0)
    Y = _normalize_rows(X - X.mean(axis=1, keepdims=True), bad, ConstantRowError, "constant")
    R = Y @ Y.T
    np.fill_diagonal(R, 1.0)
    return R


def noncentered_correlation(X) -> np.ndarray:
    """``R~ = Y~ Y~^T`` with rows ``x_i / ||x_i||``."""
    X = as_data_matrix(X)
    bad = np.flatnonzero(~np.any(X != 0, axis=1))
    Y = _normalize_rows(X, bad, ZeroRowError, "zero")
    R = Y @ Y.T
    np.fill_diagonal(R, 1.0)
    return R


def symmetric_eigenvalues(M) -> Spectrum:
    """Descending eigenvalues of a symmetric positive semi-definite matrix.

    Raises NotSymmetricError if ``M`` is asymmetric beyond ``1e-12``
    relative, and NotPSDError for eigenvalues below ``-1e-10 * lambda_1``.
    Smaller negatives are treated as round-off and clamped to zero.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSymmetricError(f"expected a square matrix, got shape {M.shape}")
    scale = np.abs(M).max() if M.size else 0.0
    if scale > 0 and np.abs(M - M.T).max() > SYM_TOL * scale:
        raise NotSymmetricError("matrix is not symmetric")
    lam = np.linalg.eigvalsh(M)[::-1]
    top = max(lam[0], 0.0)
    if lam[-1] < -PSD_TOL * top or (top == 0 and lam[-1] < 0):
        raise NotPSDError(f"matrix is indefinite (smallest eigenvalue {lam[-1]:.3e})")
    return Spectrum(np.clip(lam, 0.0, None))
