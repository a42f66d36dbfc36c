"""Timing of the numba kernels against the numpy reference path.

Run with ``python benchmarks/bench_kernels.py [--points N] [--repeat R]``.
Each kernel is called once before timing so JIT compilation is excluded;
the best of ``repeat`` runs is reported along with the largest difference
between the two backends' outputs.
"""

import argparse
import math
import time

import numpy as np

from springlinkage import kernels


def best_time(fn, repeat):
    fn()
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, nargs="+", default=[1000, 10000, 100000])
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args(argv)

    impls = kernels.implementations()
    if "numba" not in impls:
        print("numba unavailable; only the numpy path can run")
    theta_ini = math.radians(179.9)
    print(f"{'kernel':<24}{'points':>9}{'numpy [ms]':>13}{'numba [ms]':>13}{'speed-up':>10}{'max diff':>11}")
    for n in args.points:
        theta = np.linspace(theta_ini, 0.0, n)
        y = 0.1 * (math.sin(theta_ini / 2) - np.sin(theta / 2))
        cases = [(f"force model {name}", lambda m, code=code: m.translational_force(code, 0.3, 1.0, 0.05,
                                                                                  theta_ini, theta))
                 for name, code in kernels.MODEL_CODES.items()]
        cases.append(("cumulative trapezoid", lambda m: m.cumulative_trapezoid(np.cos(theta), y)))
        for label, call in cases:
            times = {name: best_time(lambda m=m: call(m), args.repeat) for name, m in impls.items()}
            diff = ""
            if "numba" in impls:
                diff = f"{float(np.max(np.abs(call(impls['numba']) - call(impls['numpy'])))):.1e}"
            nb = times.get("numba", math.nan)
            print(f"{label:<24}{n:>9}{1e3 * times['numpy']:>13.3f}{1e3 * nb:>13.3f}"
                  f"{times['numpy'] / nb:>10.2f}{diff:>11}")


if __name__ == "__main__":
    main()
