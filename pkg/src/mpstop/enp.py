"""Equi-correlated normal samples and Monte Carlo sweeps.

Columns are drawn through the rank-one decomposition

    X_j = mu + D sigma (sqrt(rho) eta_j 1 + sqrt(1 - rho) xi_j),

with all normals from numpy's PCG64 generator (``standard_normal``, i.e.
the ziggurat transform). Within a column ``eta_j`` is drawn first, then
``xi_1j, ..., xi_pj``. Replication streams come from
``SeedSequence(seed, spawn_key=(n, p, rho, rep))`` so a cell's result does
not depend on which other cells run or in what order.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .mp import cpv_limit, gk_limit
from .spectral import Spectrum, cpv_fraction, gk_fraction

MATRICES = {
    "R": linalg.sample_correlation,
    "R_tilde": linalg.noncentered_correlation,
    "S": linalg.sample_covariance,
    "S_tilde": linalg.centered_covariance,
}

GK_COLUMNS = (
    "n", "p", "c", "rho", "reps", "gk_mean", "gk_se", "gk_limit", "retention_mean", "error",
)
CPV_COLUMNS = ("n", "p", "c", "rho", "t", "reps", "cpv_mean", "cpv_se", "cpv_limit", "error")


@dataclass(frozen=True)
class EnpParams:
    p: int
    n: int
    rho: float = 0.0
    sigma: float = 1.0
    mu: np.ndarray | None = None
    d: np.ndarray | None = None
    seed: int | np.random.SeedSequence = 0

    def __post_init__(self):
        if self.p < 1 or self.n < 2:
            raise ValueError(f"need p >= 1 and n >= 2, got p={self.p}, n={self.n}")
        if not (0.0 <= self.rho < 1.0):
            raise ValueError(f"rho must lie in [0, 1), got {self.rho!r}")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")
        for name in ("mu", "d"):
            v = getattr(self, name)
            if v is not None and np.shape(v) != (self.p,):
                raise ValueError(f"{name} must have length p={self.p}")
        if self.d is not None and np.any(np.asarray(self.d) <= 0):
            raise ValueError("diagonal scaling d must be strictly positive")


def _generator(seed):
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def sample_enp(params: EnpParams) -> np.ndarray:
    """Draw a p x n data matrix from N_p(mu, D C(rho) D) scaled by sigma."""
    p, n, rho = params.p, params.n, params.rho
    z = _generator(params.seed).standard_normal((n, p + 1))
    eta = z[:, 0]
    xi = z[:, 1:].T
    X = params.sigma * (math.sqrt(rho) * eta[None, :] + math.sqrt(1.0 - rho) * xi)
    if params.d is not None:
        X = np.asarray(params.d, dtype=float)[:, None] * X
    if params.mu is not None:
        X = X + np.asarray(params.mu, dtype=float)[:, None]
    return X


def rho_hat(R) -> float:
    """Equi-correlation estimate ``lambda_1(R) / p``."""
    s = R if isinstance(R, Spectrum) else linalg.symmetric_eigenvalues(R)
    return float(s.eigenvalues[0]) / s.p


def spectrum_of(X, matrix: str = "R") -> Spectrum:
    return linalg.symmetric_eigenvalues(MATRICES[matrix](X))


@dataclass(frozen=True)
class SweepSpec:
    """Grid of (p, rho) cells at fixed n, each replicated ``reps`` times."""

    n: int
    p_values: tuple
    rho_values: tuple
    reps: int = 1
    seed: int = 0
    t: float | None = None
    matrix: str | None = None
    workers: int = field(default=1, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "p_values", tuple(int(p) for p in self.p_values))
        object.__setattr__(self, "rho_values", tuple(float(r) for r in self.rho_values))
        if not self.p_values or not self.rho_values:
            raise ValueError("p and rho lists must be nonempty")
        if self.reps < 1:
            raise ValueError("reps must be at least 1")
        if self.n < 2 or min(self.p_values) < 1:
            raise ValueError("need n >= 2 and every p >= 1")
        if any(not (0.0 <= r < 1.0) for r in self.rho_values):
            raise ValueError("every rho must lie in [0, 1)")
        if self.t is not None and not (0.0 < self.t < 1.0):
            raise ValueError("t must lie in (0, 1)")
        if self.matrix is not None and self.matrix not in MATRICES:
            raise ValueError(f"matrix must be one of {sorted(MATRICES)}")

    def cells(self):
        return [(p, rho) for p in self.p_values for rho in self.rho_values]


def replication_seed(seed: int, n: int, p: int, rho: float, rep: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(n, p, int(round(rho * 1e9)), rep))


def _replicate(spec, p, rho, default_matrix):
    matrix = spec.matrix or default_matrix
    for rep in range(spec.reps):
        seed = replication_seed(spec.seed, spec.n, p, rho, rep)
        yield spectrum_of(sample_enp(EnpParams(p=p, n=spec.n, rho=rho, seed=seed)), matrix)


def _mean_se(values):
    v = np.asarray(values, dtype=float)
    se = float(v.std(ddof=1) / math.sqrt(v.size)) if v.size > 1 else 0.0
    return float(v.mean()), se


def _gk_cell(spec, p, rho):
    row = dict.fromkeys(GK_COLUMNS)
    row.update(n=spec.n, p=p, c=p / spec.n, rho=rho, reps=spec.reps, error="")
    try:
        gks = [gk_fraction(s) for s in _replicate(spec, p, rho, "R")]
        row["gk_mean"], row["gk_se"] = _mean_se(gks)
        row["retention_mean"] = float(np.mean([p * g / min(spec.n, p) for g in gks]))
        row["gk_limit"] = gk_limit(p / spec.n, rho)
    except Exception as exc:  # noqa: BLE001 - failed cells are reported, not dropped
        row["error"] = f"cell (p={p}, rho={rho}): {type(exc).__name__}: {exc}"
    return row


def _cpv_cell(spec, p, rho):
    row = dict.fromkeys(CPV_COLUMNS)
    row.update(n=spec.n, p=p, c=p / spec.n, rho=rho, t=spec.t, reps=spec.reps, error="")
    try:
        row["cpv_mean"], row["cpv_se"] = _mean_se(
            [cpv_fraction(s, spec.t) for s in _replicate(spec, p, rho, "S_tilde")]
        )
        row["cpv_limit"] = cpv_limit(p / spec.n, rho, spec.t)
    except Exception as exc:  # noqa: BLE001
        row["error"] = f"cell (p={p}, rho={rho}): {type(exc).__name__}: {exc}"
    return row


def _run(cell_fn, spec):
    cells = spec.cells()
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            rows = list(pool.map(cell_fn, [spec] * len(cells), *zip(*cells)))
    else:
        rows = [cell_fn(spec, p, rho) for p, rho in cells]
    return sorted(rows, key=lambda r: (r["c"], r["rho"], r.get("t") or 0.0))


def run_gk_sweep(spec: SweepSpec) -> list[dict]:
    """Mean GK fraction per cell with its limit and ``p GK / min(n, p)``.

    Uses the sample correlation matrix unless ``spec.matrix`` says otherwise.
    """
    return _run(_gk_cell, spec)


def run_cpv_sweep(spec: SweepSpec) -> list[dict]:
    """Mean CPV fraction per cell with its limit. Requires ``spec.t``.

    Uses the centered covariance matrix unless ``spec.matrix`` says otherwise.
    Cells with ``t < rho`` have limit 0.
    """
    if spec.t is None:
        raise ValueError("CPV sweep needs a threshold t")
    return _run(_cpv_cell, spec)
