"""Empirical spectral distributions and the stopping rules built on them.

A :class:`Spectrum` is the descending eigenvalue list of a positive
semi-definite matrix. From it we form the ESD ``F^M`` and the eigenvalue
share function ``G^M`` (both :class:`StepDistribution`), the Guttman-Kaiser
fraction and the CPV fraction. Kolmogorov and Levy distances accept any mix
of step functions and :class:`AnalyticCDF` objects.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels

#: relative gap below which two eigenvalues count as tied in the CPV rule
TIE_TOL = 1e-10


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted in descending order, all nonnegative."""

    eigenvalues: np.ndarray

    def __post_init__(self):
        lam = np.array(self.eigenvalues, dtype=float).ravel()
        if lam.size == 0:
            raise ValueError("a spectrum needs at least one eigenvalue")
        if not np.all(np.isfinite(lam)):
            raise ValueError("eigenvalues must be finite")
        if np.any(lam < 0):
            raise ValueError("eigenvalues must be nonnegative")
        lam = np.sort(lam)[::-1].copy()
        lam.flags.writeable = False
        object.__setattr__(self, "eigenvalues", lam)

    @property
    def p(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def trace(self) -> float:
        return float(np.sum(self.eigenvalues))

    def scaled(self, k: float) -> Spectrum:
        return Spectrum(self.eigenvalues * k)

    def __len__(self):
        return self.p


@dataclass(frozen=True)
class StepDistribution:
    """Right-continuous step function, possibly defective.

    ``values[i]`` is the function value on ``[jumps[i], jumps[i+1])``; the
    function is 0 left of ``jumps[0]``. ``total`` (the last value) may be
    below 1.
    """

    jumps: np.ndarray
    values: np.ndarray
    is_step: bool = field(default=True, init=False)

    def __post_init__(self):
        x = np.asarray(self.jumps, dtype=float)
        y = np.asarray(self.values, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or x.size == 0:
            raise ValueError("jumps and values must be equal-length nonempty 1-d arrays")
        if np.any(np.diff(x) <= 0):
            raise ValueError("jump points must be strictly increasing")
        if np.any(np.diff(y) < 0) or y[0] < 0:
            raise ValueError("cumulative values must be nonnegative and nondecreasing")
        if y[-1] > 1.0 + 1e-12:
            raise ValueError("cumulative values cannot exceed 1")
        object.__setattr__(self, "jumps", x)
        object.__setattr__(self, "values", y)

    @classmethod
    def from_weights(cls, points, weights, normalizer=None):
        """Step function with mass ``weights / normalizer`` at ``points``."""
        pts = np.asarray(points, dtype=float)
        w = np.asarray(weights, dtype=float)
        order = np.argsort(pts, kind="stable")
        pts, w = pts[order], w[order]
        uniq, start = np.unique(pts, return_index=True)
        sums = np.add.reduceat(w, start)
        cum = np.cumsum(sums)
        if normalizer is not None:
            cum = cum / normalizer
        return cls(uniq, cum)

    @property
    def total(self) -> float:
        return float(self.values[-1])

    @property
    def breakpoints(self) -> np.ndarray:
        return self.jumps

    @property
    def support(self):
        return float(self.jumps[0]), float(self.jumps[-1])

    def _lookup(self, x, side):
        arr = np.asarray(x, dtype=float)
        k = np.searchsorted(self.jumps, arr, side=side)
        out = np.concatenate(([0.0], self.values))[k]
        return float(out) if arr.ndim == 0 else out

    def __call__(self, x):
        return self._lookup(x, "right")

    def left(self, x):
        """Left limit ``F(x-)``."""
        return self._lookup(x, "left")


class AnalyticCDF:
    """A (possibly defective) distribution function given by a formula.

    ``func`` must be vectorized, nondecreasing and continuous except at the
    keys of ``atoms`` (mapping location to jump size). ``support`` bounds
    the region where the function is not constant.
    """

    is_step = False

    def __init__(self, func, atoms=None, support=(0.0, 1.0)):
        self.func = func
        self.atoms = dict(atoms or {})
        self.support = (float(support[0]), float(support[1]))

    @property
    def breakpoints(self) -> np.ndarray:
        return np.unique(np.array([*self.atoms, *self.support], dtype=float))

    def __call__(self, x):
        return self.func(x)

    def left(self, x):
        arr = np.asarray(x, dtype=float)
        out = np.asarray(self.func(arr), dtype=float).copy()
        for loc, mass in self.atoms.items():
            out = np.where(arr == loc, out - mass, out)
        return float(out) if arr.ndim == 0 else out


def as_spectrum(s) -> Spectrum:
    return s if isinstance(s, Spectrum) else Spectrum(s)


def esd(s) -> StepDistribution:
    """Empirical spectral distribution ``F^M`` as a step function."""
    s = as_spectrum(s)
    lam = s.eigenvalues[::-1]
    uniq, counts = np.unique(lam, return_counts=True)
    return StepDistribution(uniq, np.cumsum(counts) / s.p)


def esd_eval(s, x):
    """Fraction of eigenvalues ``<= x``."""
    s = as_spectrum(s)
    if np.ndim(x) == 0:
        if x == math.inf:
            return 1.0
        if x == -math.inf:
            return 0.0
        return np.count_nonzero(s.eigenvalues <= x) / s.p
    return np.searchsorted(s.eigenvalues[::-1], np.asarray(x, dtype=float), side="right") / s.p


def gk_fraction(s) -> float:
    """Share of eigenvalues strictly above the mean eigenvalue."""
    s = as_spectrum(s)
    lam = s.eigenvalues
    # clamp so rounding in the sum cannot push the mean outside [lambda_p, lambda_1]
    mean = min(max(math.fsum(lam) / s.p, lam[-1]), lam[0])
    return np.count_nonzero(lam > mean) / s.p


def g_step(s) -> StepDistribution:
    """Cumulative eigenvalue share ``G^M(x) = sum_{l <= x} l / sum l``.

    Zero eigenvalues carry no weight and do not appear as jumps.
    """
    s = as_spectrum(s)
    lam = s.eigenvalues
    if lam[0] <= 0:
        raise ValueError("G^M needs at least one positive eigenvalue")
    pos = lam[lam > 0][::-1]
    d = StepDistribution.from_weights(pos, pos, normalizer=np.sum(pos))
    # pin the last value so G^M is a genuine distribution function
    vals = d.values.copy()
    vals[-1] = 1.0
    return StepDistribution(d.jumps, np.minimum(vals, 1.0))


def step_generalized_inverse(d: StepDistribution, u: float) -> float:
    """``inf{x : F(x) >= u}`` with ``inf(empty) = inf`` and ``-inf`` below."""
    if u <= 0.0:
        return -math.inf
    if u > d.total:
        return math.inf
    k = int(np.searchsorted(d.values, u, side="left"))
    return float(d.jumps[k])


def _check_t(t):
    if not (0.0 < t < 1.0):
        raise ValueError(f"t must lie in (0, 1), got {t!r}")


def cpv_fraction(s, t: float, tau: float = TIE_TOL) -> float:
    """Fraction ``q/p`` retained by the cumulative-percentage-of-variation rule.

    ``q`` is the largest index below ``p`` whose leading eigenvalues explain
    at most a share ``t`` of the trace and which is not followed by a tied
    eigenvalue (gap ``<= tau * lambda_1``). ``q = 0`` is always admissible.
    """
    s = as_spectrum(s)
    _check_t(t)
    if s.eigenvalues[0] <= 0:
        raise ValueError("CPV rule needs at least one positive eigenvalue")
    return kernels.cpv_count(s.eigenvalues, t, tau) / s.p


def cpv_fraction_via_inverse(s, t: float) -> float:
    """Same rule, computed as ``1 - F^M((G^M)^-(1 - t))``."""
    s = as_spectrum(s)
    _check_t(t)
    return 1.0 - esd_eval(s, step_generalized_inverse(g_step(s), 1.0 - t))


def _grid(f, g, resolution):
    lo = min(f.support[0], g.support[0])
    hi = max(f.support[1], g.support[1])
    n = max(2, int(math.ceil((hi - lo) / resolution)) + 1)
    return np.linspace(lo, hi, n)


def kolmogorov_distance(f, g, resolution: float = 1e-6) -> float:
    """``sup_x |f(x) - g(x)|``.

    Exact whenever one side is a step function: values and left limits at
    every breakpoint cover the extremes. Two analytic functions are compared
    on a grid of the given resolution as well.
    """
    pts = np.union1d(f.breakpoints, g.breakpoints)
    if not (f.is_step or g.is_step):
        pts = np.union1d(pts, _grid(f, g, resolution))
    if pts.size == 0:
        return 0.0
    right = np.abs(np.asarray(f(pts)) - np.asarray(g(pts)))
    left = np.abs(np.asarray(f.left(pts)) - np.asarray(g.left(pts)))
    return float(max(right.max(), left.max()))


def _levy_feasible(f, g, eps, extra):
    xf = f.breakpoints if extra is None else np.union1d(f.breakpoints, extra)
    xg = g.breakpoints if extra is None else np.union1d(g.breakpoints, extra)
    # g(x) >= f(x - eps) - eps, checked at breakpoints of both sides
    if np.any(g(xf + eps) - f(xf) + eps < 0) or np.any(g.left(xf + eps) - f.left(xf) + eps < 0):
        return False
    if np.any(g(xg) - f(xg - eps) + eps < 0) or np.any(g.left(xg) - f.left(xg - eps) + eps < 0):
        return False
    # g(x) <= f(x + eps) + eps
    if np.any(f(xf) + eps - g(xf - eps) < 0) or np.any(f.left(xf) + eps - g.left(xf - eps) < 0):
        return False
    if np.any(f(xg + eps) + eps - g(xg) < 0) or np.any(f.left(xg + eps) + eps - g.left(xg) < 0):
        return False
    return True


def levy_distance(f, g, tol: float = 1e-9, resolution: float = 1e-6) -> float:
    """Levy distance by bisection on the corridor width.

    The search starts from the Kolmogorov distance, which is always a
    feasible width, so the result never exceeds it. Accurate to ``tol``.
    """
    k = kolmogorov_distance(f, g, resolution)
    if k == 0.0:
        return 0.0
    if f.is_step and g.is_step:
        args = (f.jumps, f.values, g.jumps, g.values)
        hi = k if kernels.levy_feasible(*args, k) else 1.0
        return float(kernels.levy_steps(*args, hi, tol))
    extra = None if (f.is_step or g.is_step) else _grid(f, g, max(resolution, 1e-4))
    lo, hi = 0.0, (k if _levy_feasible(f, g, k, extra) else 1.0)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _levy_feasible(f, g, mid, extra):
            hi = mid
        else:
            lo = mid
    return hi
