"""Marchenko-Pastur machinery for the Guttman-Kaiser and CPV stopping rules.

Exact Marchenko-Pastur distributions and the limiting retention fractions
(:mod:`mpstop.mp`), empirical spectral distributions and the finite-sample
rules (:mod:`mpstop.spectral`), matrix constructors (:mod:`mpstop.linalg`),
equi-correlated normal simulation (:mod:`mpstop.enp`) and dataset analysis
(:mod:`mpstop.data_io`).
"""
from ._backend import kernels as _kernels
from .enp import EnpParams, SweepSpec, rho_hat, run_cpv_sweep, run_gk_sweep, sample_enp
from .linalg import (
    centered_covariance,
    noncentered_correlation,
    sample_correlation,
    sample_covariance,
    symmetric_eigenvalues,
)
from .mp import (
    LimitParams,
    MPLaw,
    cpv_limit,
    gk_limit,
    gk_threshold,
    mp_cdf,
    mp_distribution,
    mp_pdf,
    mp_quantile,
    mp_sf,
    mp_tail_mass_G,
    mp_tail_mass_G_inverse,
)
from .spectral import (
    AnalyticCDF,
    Spectrum,
    StepDistribution,
    cpv_fraction,
    cpv_fraction_via_inverse,
    esd,
    esd_eval,
    g_step,
    gk_fraction,
    kolmogorov_distance,
    levy_distance,
    step_generalized_inverse,
)

#: name of the kernel backend in use, "cython" or "python"
BACKEND = _kernels.BACKEND

__version__ = "0.1.0"
