"""Plot-ready data behind the GK / CPV figures, at desk scale.

Each bundle is a directory with one CSV per curve and ``manifest.json``
recording the grids, sample size, replications and seed actually used.
The original figures go up to p = 20000 at n = 1000; the defaults here stop
at p = 2000 with n = 500.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .data_io import write_table
from .enp import SweepSpec, run_cpv_sweep, run_gk_sweep
from .mp import cpv_limit, gk_limit

RHOS = (0.0, 0.3, 0.5, 0.8)
DESK_N = 500
DESK_P = (25, 50, 100, 200, 300, 400, 500, 750, 1000, 1250, 1500, 2000)
C_GRID = tuple(np.round(np.arange(0.05, 20.0001, 0.05), 10))
T_DEFAULT = 0.7


def _tag(rho):
    return f"rho{rho:g}".replace(".", "p")


def _write_manifest(out, figure, files, **info):
    manifest = {"figure": figure, "scale": "desk", "files": files, **info}
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def figure_limits(out, figure, rhos=RHOS, c_grid=C_GRID, t=None):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for rho in rhos:
        rows = [{"c": float(c), "rho": rho, "gk_limit": gk_limit(float(c), rho)} for c in c_grid]
        cols = ["c", "rho", "gk_limit"]
        if t is not None:
            for r in rows:
                r["t"] = t
                r["cpv_limit"] = cpv_limit(r["c"], rho, t)
            cols += ["t", "cpv_limit"]
        name = f"fig{figure}_{_tag(rho)}.csv"
        write_table(rows, cols, out / name)
        files.append(name)
    grid = {"start": float(c_grid[0]), "stop": float(c_grid[-1]), "points": len(c_grid)}
    return _write_manifest(out, figure, files, rho_values=list(rhos), c_grid=grid, t=t,
                           seed=None, simulated=False)


def figure_simulated(out, figure, n=DESK_N, p_values=DESK_P, rhos=RHOS, reps=2, seed=0,
                     t=T_DEFAULT, workers=1):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    if figure == 3:
        spec = SweepSpec(n=n, p_values=p_values, rho_values=rhos, reps=reps, seed=seed,
                         workers=workers)
        rows = run_gk_sweep(spec)
        for r in rows:
            if r["gk_limit"] is not None:
                r["retention_limit"] = r["gk_limit"] * r["p"] / min(r["n"], r["p"])
        cols = ["n", "p", "c", "rho", "retention_mean", "retention_limit", "gk_mean",
                "gk_limit", "error"]
        matrix = "R"
    else:
        spec = SweepSpec(n=n, p_values=p_values, rho_values=rhos, reps=reps, seed=seed, t=t,
                         workers=workers)
        rows = run_cpv_sweep(spec)
        cols = ["n", "p", "c", "rho", "t", "cpv_mean", "cpv_se", "cpv_limit", "error"]
        matrix = "S_tilde"
    files = []
    for rho in rhos:
        name = f"fig{figure}_{_tag(rho)}.csv"
        write_table([r for r in rows if r["rho"] == rho], cols, out / name)
        files.append(name)
    return _write_manifest(out, figure, files, n=n, p_values=list(p_values),
                           rho_values=list(rhos), reps=reps, seed=seed,
                           t=t if figure == 4 else None, matrix=matrix, simulated=True,
                           paper_scale="n=1000, p up to 20000",
                           errors=[r["error"] for r in rows if r["error"]])


def figure_bundle(which, out, **kw):
    """Emit the data for figure 2, 3, 4 or 5 into directory ``out``."""
    if which == 2:
        return figure_limits(out, 2, rhos=kw.get("rhos", RHOS))
    if which == 5:
        return figure_limits(out, 5, rhos=kw.get("rhos", RHOS), t=kw.get("t", T_DEFAULT))
    if which in (3, 4):
        return figure_simulated(out, which, **kw)
    raise ValueError(f"no figure {which}; choose 2, 3, 4 or 5")
