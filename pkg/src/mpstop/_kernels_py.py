"""Pure-Python kernels.

Reference implementation of everything in ``_kernels.pyx``. The two must
agree: array functions to rounding, integer/step kernels exactly. All
Marchenko-Pastur kernels work at unit scale (sigma^2 = 1); callers rescale.
"""
import math

import numpy as np

BACKEND = "python"


def _edges(c):
    rc = math.sqrt(c)
    return (1.0 - rc) ** 2, (1.0 + rc) ** 2


def _atom(c):
    return 1.0 - 1.0 / c if c > 1.0 else 0.0


def _cdf_scalar(c, x, a, b, atom):
    if x < 0.0:
        return 0.0
    if x >= b:
        return 1.0
    if x <= a:
        return atom
    s = math.sqrt((b - x) * (x - a))
    t1 = math.atan2(b + a - 2.0 * x, 2.0 * s)
    t2 = 0.0
    if c != 1.0:
        d = 1.0 - c
        num = 2.0 * a * b - (a + b) * x
        t2 = d * math.atan2(math.copysign(1.0, d) * num, 2.0 * abs(d) * s)
    f = (math.pi * c + s - (1.0 + c) * t1 + t2) / (2.0 * math.pi * c)
    if c > 1.0:
        return 0.5 * (c - 1.0) / c + f
    return f


def _tail_scalar(c, x, a, b):
    if x <= a:
        return 0.0
    if x >= b:
        return 1.0
    u = x - (1.0 + c)
    s = math.sqrt((b - x) * (x - a))
    v = min(1.0, max(-1.0, u / (2.0 * math.sqrt(c))))
    return (0.5 * u * s + 2.0 * c * math.asin(v) + math.pi * c) / (2.0 * math.pi * c)


def pdf_unit(c, x):
    a, b = _edges(c)
    x = np.asarray(x, dtype=float)
    inside = (x > a) & (x < b) & (x > 0.0)
    xi = np.where(inside, x, 1.0)
    with np.errstate(invalid="ignore"):
        val = np.sqrt((b - xi) * (xi - a)) / (2.0 * math.pi * c * xi)
    return np.where(inside, val, 0.0)


def cdf_unit(c, x):
    a, b = _edges(c)
    atom = _atom(c)
    x = np.asarray(x, dtype=float)
    inside = (x > a) & (x < b)
    xi = np.where(inside, x, 0.5 * (a + b))
    s = np.sqrt((b - xi) * (xi - a))
    t1 = np.arctan2(b + a - 2.0 * xi, 2.0 * s)
    if c != 1.0:
        d = 1.0 - c
        num = 2.0 * a * b - (a + b) * xi
        t2 = d * np.arctan2(math.copysign(1.0, d) * num, 2.0 * abs(d) * s)
    else:
        t2 = 0.0
    f = (math.pi * c + s - (1.0 + c) * t1 + t2) / (2.0 * math.pi * c)
    if c > 1.0:
        f = f + 0.5 * (c - 1.0) / c
    out = np.where(x >= b, 1.0, np.where(x < 0.0, 0.0, atom))
    return np.where(inside, f, out)


def tail_mass_unit(c, x):
    a, b = _edges(c)
    x = np.asarray(x, dtype=float)
    inside = (x > a) & (x < b)
    xi = np.where(inside, x, 0.5 * (a + b))
    u = xi - (1.0 + c)
    s = np.sqrt((b - xi) * (xi - a))
    v = np.clip(u / (2.0 * math.sqrt(c)), -1.0, 1.0)
    g = (0.5 * u * s + 2.0 * c * np.arcsin(v) + math.pi * c) / (2.0 * math.pi * c)
    return np.where(inside, g, np.where(x >= b, 1.0, 0.0))


def _bisect(f, u, lo, hi, xtol, maxiter):
    # invariant: f(lo) < u <= f(hi); returns the upper end so f(result) >= u
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if f(mid) >= u:
            hi = mid
        else:
            lo = mid
        if hi - lo <= xtol * min(1.0, hi):
            break
    return hi


def cdf_inverse_unit(c, u, xtol, maxiter):
    a, b = _edges(c)
    atom = _atom(c)
    return _bisect(lambda x: _cdf_scalar(c, x, a, b, atom), u, a, b, xtol, maxiter)


def tail_mass_inverse_unit(c, u, xtol, maxiter):
    a, b = _edges(c)
    return _bisect(lambda x: _tail_scalar(c, x, a, b), u, a, b, xtol, maxiter)


def cpv_count(lam, t, tau):
    """Largest admissible q for descending ``lam`` (q = 0 always admissible)."""
    lam = np.asarray(lam, dtype=float)
    p = lam.shape[0]
    cum = np.cumsum(lam)
    total = cum[-1]
    tie = tau * lam[0]
    best = 0
    for q in range(1, p):
        if cum[q - 1] / total > t:
            break
        if lam[q - 1] - lam[q] > tie:
            best = q
    return best


def _step_at(xs, ys, x):
    k = np.searchsorted(xs, x, side="right")
    padded = np.concatenate(([0.0], ys))
    return padded[k]


def levy_feasible(xf, yf, xg, yg, eps):
    if np.any(_step_at(xg, yg, xf + eps) < yf - eps):
        return False
    if np.any(_step_at(xg, yg, xf - eps) > yf + eps):
        return False
    if np.any(yg < _step_at(xf, yf, xg - eps) - eps):
        return False
    if np.any(yg > _step_at(xf, yf, xg + eps) + eps):
        return False
    return True


def levy_steps(xf, yf, xg, yg, hi, tol):
    """Bisection for the Levy distance between two right-continuous step functions.

    ``hi`` must be a feasible corridor width (the Kolmogorov distance is one).
    """
    xf = np.asarray(xf, dtype=float)
    yf = np.asarray(yf, dtype=float)
    xg = np.asarray(xg, dtype=float)
    yg = np.asarray(yg, dtype=float)
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if levy_feasible(xf, yf, xg, yg, mid):
            hi = mid
        else:
            lo = mid
    return hi
