"""Time the compiled and pure-Python kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from mpstop import _backend


def cases(rng):
    x = np.linspace(-0.5, 5.0, 100_000)
    lam = np.sort(rng.exponential(size=2000))[::-1].copy()
    k = 200
    xf, xg = np.sort(rng.random(k)), np.sort(rng.random(k) + 0.01)
    yf = np.arange(1, k + 1) / k
    return {
        "cdf_unit (1e5 points)": lambda m: m.cdf_unit(0.5, x),
        "tail_mass_unit (1e5 points)": lambda m: m.tail_mass_unit(0.5, x),
        "cdf_inverse_unit (x100)": lambda m: [m.cdf_inverse_unit(0.5, u, 1e-10, 200)
                                              for u in np.linspace(0.01, 0.99, 100)],
        "cpv_count (p=2000, x100)": lambda m: [m.cpv_count(lam, t, 1e-10)
                                               for t in np.linspace(0.01, 0.99, 100)],
        "levy_steps (200 jumps each)": lambda m: m.levy_steps(xf, yf, xg, yf, 1.0, 1e-9),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    backends = {name: _backend.load(name) for name in _backend.available()}
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s}" + "".join(f"{n:>12s}" for n in backends) + "     speedup")
    for label, fn in cases(rng).items():
        times = {n: min(timeit.repeat(lambda: fn(m), number=1, repeat=args.repeat))
                 for n, m in backends.items()}
        row = f"{label:32s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times.values())
        if len(times) == 2:
            row += f"  {times['python'] / times['cython']:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
