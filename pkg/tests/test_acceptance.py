"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also repeated in the terminal summary.
"""
import math
import time

import numpy as np
import pytest

from mpstop.cli import main
from mpstop.enp import EnpParams, SweepSpec, replication_seed, rho_hat, run_gk_sweep, sample_enp, spectrum_of
from mpstop.linalg import sample_correlation
from mpstop.mp import MPLaw, cpv_limit, gk_limit, gk_threshold, mp_cdf, mp_distribution
from mpstop.spectral import (
    Spectrum,
    StepDistribution,
    cpv_fraction,
    cpv_fraction_via_inverse,
    esd,
    g_step,
    gk_fraction,
    kolmogorov_distance,
    levy_distance,
    step_generalized_inverse,
)
from tests import oracles

C_GRID = (0.1, 0.5, 1.0, 2.0, 4.0, 10.0)
THRESHOLD_C = np.geomspace(0.05, 30.0, 50)
THRESHOLD_RHO = np.linspace(0.0, 0.95, 20)


def test_01_closed_form_cdf_against_quadrature(record):
    start = time.perf_counter()
    worst = 0.0
    for c in C_GRID:
        law = MPLaw(c)
        xs = np.linspace(law.lower - 0.1, law.upper + 0.1, 1000)
        ref = np.array([oracles.quad_cdf(c, x) for x in xs])
        worst = max(worst, float(np.max(np.abs(mp_cdf(law, xs) - ref))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 10.0
    assert record("1 closed-form CDF vs quadrature", ok, f"max err {worst:.2e} (<=1e-8), {elapsed:.2f}s (<10s)")


def test_02_gk_dichotomy(record):
    g0, g5 = gk_limit(0.001, 0.0), gk_limit(0.001, 0.5)
    curve = [gk_limit(c, 0.0) for c in np.arange(1, 41) / 10]
    decreasing = bool(np.all(np.diff(curve) < 0))
    ok = 0.49 < g0 < 0.5 and g5 < 0.01 and decreasing
    assert record("2 GK dichotomy", ok,
                  f"GK(0.001,0)={g0:.6f}, GK(0.001,0.5)={g5:.3g}, strictly decreasing={decreasing}")


def test_03a_threshold_equality(record):
    worst, count = 0.0, 0
    for rho in THRESHOLD_RHO:
        for c in THRESHOLD_C:
            if c >= gk_threshold(rho):
                worst = max(worst, abs(gk_limit(c, rho) - 1 / c))
                count += 1
    ok = count > 0 and worst <= 1e-10
    assert record("3a GK = 1/c at and above threshold", ok, f"{count} cells, max |GK-1/c| {worst:.2e}")


def test_03b_above_reciprocal_below_threshold(record):
    # as stated, GK > 1/c below the threshold; analysis: GK <= 1/c always, see the ledger
    below = [(c, rho) for rho in THRESHOLD_RHO for c in THRESHOLD_C if c < gk_threshold(rho)]
    hits = sum(gk_limit(c, rho) > 1 / c for c, rho in below)
    ok = hits == len(below)
    assert record("3b GK > 1/c below threshold", ok,
                  f"{hits}/{len(below)} cells satisfy GK > 1/c (GK < 1/c holds in "
                  f"{sum(gk_limit(c, r) < 1 / c for c, r in below)})")


def test_04_plugin_value(record):
    g = gk_limit(0.16, 0.02)
    assert record("4 GK(0.16, 0.02) = 0.44 +- 0.005", abs(g - 0.44) <= 0.005, f"{g:.5f}")


def test_05_monte_carlo_gk(record):
    start = time.perf_counter()
    rows = run_gk_sweep(SweepSpec(n=1000, p_values=[200], rho_values=[0.0, 0.5], reps=10, seed=2024))
    elapsed = time.perf_counter() - start
    gaps = {r["rho"]: abs(r["gk_mean"] - r["gk_limit"]) for r in rows}
    ok = gaps[0.0] <= 0.01 and gaps[0.5] <= 0.02 and elapsed < 120
    assert record("5 Monte Carlo GK convergence", ok,
                  f"gap rho=0 {gaps[0.0]:.4f} (<=0.01), rho=0.5 {gaps[0.5]:.4f} (<=0.02), {elapsed:.1f}s")


def test_06_saturation(record):
    # as stated the ratio equals 1; centred R has rank n-1, so it is (n-1)/n here
    n, p = 100, 1000
    ratios = []
    for rep in range(10):
        X = sample_enp(EnpParams(p=p, n=n, seed=replication_seed(2024, n, p, 0.0, rep)))
        ratios.append(p * gk_fraction(spectrum_of(X, "R")) / min(n, p))
    exact = sum(r == 1.0 for r in ratios)
    ok = exact >= 9
    assert record("6 saturation p GK / min(n,p) = 1", ok,
                  f"{exact}/10 seeds equal 1; observed ratios {sorted(set(ratios))}")


def test_07_limiting_spectral_distributions(record, rng):
    n, p = 2000, 400
    worst = 0.0
    for rho in (0.0, 0.5):
        for sigma2 in (1.0, 4.0):
            X = sample_enp(EnpParams(p=p, n=n, rho=rho, sigma=math.sqrt(sigma2), seed=70))
            law = mp_distribution(MPLaw(0.2, sigma2 * (1 - rho)))
            worst = max(worst, kolmogorov_distance(esd(spectrum_of(X, "S")), law))
        X = sample_enp(EnpParams(p=p, n=n, rho=rho, mu=rng.uniform(-5, 5, p), d=rng.uniform(0.5, 3, p), seed=71))
        worst = max(worst, kolmogorov_distance(esd(spectrum_of(X, "R")), mp_distribution(MPLaw(0.2, 1 - rho))))
    assert record("7 ESD of S and R vs MP", worst <= 0.05, f"max Kolmogorov distance {worst:.4f} (<=0.05)")


def test_08_rho_estimator(record):
    X = sample_enp(EnpParams(p=500, n=1000, rho=0.5, seed=80))
    r = rho_hat(sample_correlation(X))
    assert record("8 lambda_1(R)/p near 0.5", abs(r - 0.5) <= 0.02, f"{r:.4f}")


def test_09_cpv_limits(record):
    small = cpv_limit(0.001, 0.0, 0.7)
    zeros = [cpv_limit(c, 0.8, 0.7) for c in (0.001, 0.01, 0.1, 0.5, 1, 2, 4, 10, 20)]
    rows = []
    for rep in range(3):
        X = sample_enp(EnpParams(p=1000, n=1000, rho=0.3, seed=replication_seed(90, 1000, 1000, 0.3, rep)))
        rows.append(cpv_fraction(spectrum_of(X, "S_tilde"), 0.7))
    mc, lim = float(np.mean(rows)), cpv_limit(1.0, 0.3, 0.7)
    clauses = {
        "CP(0.001,0,0.7)=0.7+-0.01": abs(small - 0.7) <= 0.01,
        "CP(c,0.8,0.7)=0": all(z == 0.0 for z in zeros),
        "Monte Carlo within 0.02": abs(mc - lim) <= 0.02,
    }
    detail = (f"CP(0.001,0,0.7)={small:.5f}; zeros={all(z == 0.0 for z in zeros)}; "
              f"MC {mc:.4f} vs limit {lim:.4f}; failing: {[k for k, v in clauses.items() if not v]}")
    assert record("9 CPV limits", all(clauses.values()), detail)


def _random_step(rng):
    k = int(rng.integers(1, 12))
    jumps = np.sort(rng.choice(np.arange(-300, 301) / 100, size=k, replace=False))
    vals = np.sort(rng.random(k))
    if rng.random() < 0.7:
        vals[-1] = 1.0
    return StepDistribution(jumps, vals)


def _random_spectrum(rng):
    p = int(rng.integers(1, 30))
    if rng.random() < 0.4:
        lam = rng.integers(0, 4, size=p).astype(float)
        lam[0] = max(lam[0], 1.0)
    else:
        lam = rng.exponential(size=p) * 10.0 ** rng.uniform(-3, 3)
    return Spectrum(lam)


def test_10_structural_properties(record):
    rng = np.random.default_rng(10)
    levy_ok = 0
    for _ in range(1000):
        f, g = _random_step(rng), _random_step(rng)
        levy_ok += levy_distance(f, g) <= kolmogorov_distance(f, g)
    scale_ok = repr_ok = bound_ok = 0
    spectra = [_random_spectrum(rng) for _ in range(1000)]
    for s in spectra:
        t = float(rng.uniform(0.01, 0.99))
        scale_ok += all(
            gk_fraction(s.scaled(k)) == gk_fraction(s) and cpv_fraction(s.scaled(k), t) == cpv_fraction(s, t)
            for k in (0.5, 2.0, 10.0)
        )
        repr_ok += abs(cpv_fraction(s, t) - cpv_fraction_via_inverse(s, t)) <= 1e-12
        pos = s.eigenvalues[s.eigenvalues > 0]
        g = g_step(s)
        bound_ok += all(pos.min() <= step_generalized_inverse(g, u) <= pos.max() for u in np.arange(1, 10) / 10)
    ok = levy_ok == 1000 and scale_ok == repr_ok == bound_ok == 1000
    assert record("10 structural properties", ok,
                  f"Le<=K {levy_ok}/1000, scale {scale_ok}/1000, representation {repr_ok}/1000, "
                  f"bound {bound_ok}/1000")


def test_11_simulate_is_deterministic(record, tmp_path, capsys):
    argv = ["simulate", "--n", "200", "--p-list", "20,100,400", "--rho-list", "0,0.3",
            "--t", "0.7", "--reps", "3", "--seed", "11"]
    codes = [main(argv + ["--out", str(tmp_path / d)]) for d in ("a", "b")]
    capsys.readouterr()
    same = all(
        (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
        for f in ("gk_sweep.csv", "cpv_sweep.csv")
    )
    assert record("11 simulate byte-identical", codes == [0, 0] and same, f"exit codes {codes}, identical={same}")
