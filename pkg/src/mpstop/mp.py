"""Marchenko-Pastur distributions and the limiting retention fractions.

Every evaluation goes through a unit-scale kernel applied to ``x / sigma2``,
so ``F_{c,s}(x) == F_{c,1}(x / s)`` holds bit for bit. Infinite results
(empty level sets of a generalized inverse) are returned as ``math.inf`` or
``-math.inf``; NaN is never used as a sentinel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .spectral import AnalyticCDF

XTOL = 1e-10
MAXITER = 200


def _check_positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a finite positive number, got {value!r}")


def _check_rho(rho):
    if not (0.0 <= rho < 1.0):
        raise ValueError(f"rho must lie in [0, 1), got {rho!r}")


@dataclass(frozen=True)
class MPLaw:
    """Marchenko-Pastur law with index ``c`` and scale ``sigma2``."""

    c: float
    sigma2: float = 1.0

    def __post_init__(self):
        _check_positive("c", self.c)
        _check_positive("sigma2", self.sigma2)

    @property
    def lower(self) -> float:
        return self.sigma2 * (1.0 - math.sqrt(self.c)) ** 2

    @property
    def upper(self) -> float:
        return self.sigma2 * (1.0 + math.sqrt(self.c)) ** 2

    @property
    def atom(self) -> float:
        """Probability mass at the origin."""
        return max(0.0, 1.0 - 1.0 / self.c)

    @property
    def mean(self) -> float:
        return self.sigma2

    def scaled(self, k: float) -> MPLaw:
        return MPLaw(self.c, self.sigma2 * k)


@dataclass(frozen=True)
class LimitParams:
    """Arguments of the limiting GK and CPV fractions."""

    c: float
    rho: float = 0.0
    t: float | None = None

    def __post_init__(self):
        _check_positive("c", self.c)
        _check_rho(self.rho)
        if self.t is not None and not (0.0 < self.t < 1.0):
            raise ValueError(f"t must lie in (0, 1), got {self.t!r}")

    @property
    def gk(self) -> float:
        return gk_limit(self.c, self.rho)

    @property
    def cpv(self) -> float:
        if self.t is None:
            raise ValueError("cpv limit needs a threshold t")
        return cpv_limit(self.c, self.rho, self.t)


def _unit_eval(kernel, law, x):
    arr = np.asarray(x, dtype=float)
    out = kernel(law.c, arr / law.sigma2)
    if arr.ndim == 0:
        return float(out)
    return out


def mp_pdf(law: MPLaw, x):
    """Density of the continuous part; the atom at 0 is not included."""
    arr = np.asarray(x, dtype=float)
    out = kernels.pdf_unit(law.c, arr / law.sigma2) / law.sigma2
    if arr.ndim == 0:
        return float(out)
    return out


def mp_cdf(law: MPLaw, x):
    """Right-continuous distribution function, closed form on (a, b).

    At the edges the closed form is not evaluated: ``F(a)`` is the atom
    ``max(0, 1 - 1/c)`` and ``F(b) = 1``.
    """
    return _unit_eval(kernels.cdf_unit, law, x)


def mp_sf(law: MPLaw, x):
    """Complementary distribution function ``1 - F``, with ``sf(inf) = 0``."""
    if np.ndim(x) == 0 and math.isinf(x):
        return 0.0 if x > 0 else 1.0
    return 1.0 - mp_cdf(law, x)


def mp_tail_mass_G(law: MPLaw, x):
    """Share of the mean carried by eigenvalues at most ``x``.

    Normalised by the mean ``sigma2``. The atom at zero contributes nothing.
    """
    return _unit_eval(kernels.tail_mass_unit, law, x)


def mp_quantile(law: MPLaw, u: float) -> float:
    """Generalized inverse ``inf{x : F(x) >= u}`` for ``u`` in [0, 1].

    Returns 0 for ``u`` up to the atom (and the lower edge for ``u = 0``
    when there is no atom). Interior values come from bisection on [a, b],
    stopped once the bracket is below ``1e-10`` (relative near zero), and
    the returned point always satisfies ``F(x) >= u``.
    """
    if not (0.0 <= u <= 1.0):
        raise ValueError(f"u must lie in [0, 1], got {u!r}")
    c = law.c
    if c > 1.0 and u <= law.atom:
        return 0.0
    if u == 0.0:
        return law.lower
    if u == 1.0:
        return law.upper
    return law.sigma2 * kernels.cdf_inverse_unit(c, u, XTOL, MAXITER)


def mp_tail_mass_G_inverse(law: MPLaw, u: float, scale: float = 1.0) -> float:
    """Generalized inverse of ``scale * G`` at ``u``.

    ``scale`` in (0, 1] gives the defective version, so
    ``(kG)^-(z) = G^-(z / k)``. Returns ``-inf`` for ``z <= 0`` (level set
    unbounded below) and ``inf`` for ``z > 1`` (empty level set).
    """
    _check_positive("scale", scale)
    z = u / scale
    if z <= 0.0:
        return -math.inf
    if z > 1.0:
        return math.inf
    if z == 1.0:
        return law.upper
    return law.sigma2 * kernels.tail_mass_inverse_unit(law.c, z, XTOL, MAXITER)


def gk_limit(c: float, rho: float = 0.0) -> float:
    """Limiting Guttman-Kaiser retention fraction ``1 - F_{c,1}(1/(1-rho))``."""
    _check_positive("c", c)
    _check_rho(rho)
    return 1.0 - float(kernels.cdf_unit(c, np.array([1.0 / (1.0 - rho)]))[0])


def gk_threshold(rho: float) -> float:
    """Smallest ``c`` for which the limiting GK fraction equals ``1/c``."""
    _check_rho(rho)
    return (1.0 / math.sqrt(1.0 - rho) + 1.0) ** 2


def cpv_limit(c: float, rho: float, t: float) -> float:
    """Limiting CPV retention fraction ``1 - F_{c,1}(G_{c,1}^-((1-t)/(1-rho)))``."""
    _check_positive("c", c)
    _check_rho(rho)
    if not (0.0 < t < 1.0):
        raise ValueError(f"t must lie in (0, 1), got {t!r}")
    law = MPLaw(c, 1.0)
    return mp_sf(law, mp_tail_mass_G_inverse(law, (1.0 - t) / (1.0 - rho)))


def mp_distribution(law: MPLaw) -> AnalyticCDF:
    """Wrap ``law`` for use with the Kolmogorov and Levy distances."""
    atoms = {0.0: law.atom} if law.atom > 0 else {}
    return AnalyticCDF(
        lambda x: mp_cdf(law, x), atoms=atoms, support=(min(0.0, law.lower), law.upper)
    )
