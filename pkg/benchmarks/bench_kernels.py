"""Time the compiled kernels against their pure-numpy fallbacks.

Run with ``python benchmarks/bench_kernels.py``. The numba column is
skipped when numba is missing or disabled via ``REFLECTAP_DISABLE_NUMBA``.
"""

import argparse
import timeit

import numpy as np

from reflectap import kernels


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_convolve(sizes, repeat):
    rng = np.random.default_rng(0)
    rows = []
    for n in sizes:
        u = rng.standard_normal(n)
        r = np.exp(-0.005)
        ref = kernels.exp_convolve_numpy(u, r)
        t_np = best_of(lambda: kernels.exp_convolve_numpy(u, r), repeat)
        t_nb = diff = None
        if kernels.HAS_NUMBA:
            out = kernels.exp_convolve_numba(u, r)  # compile outside the timer
            diff = float(np.max(np.abs(out - ref)) / np.max(np.abs(ref)))
            t_nb = best_of(lambda: kernels.exp_convolve_numba(u, r), repeat)
        rows.append(("exp_convolve", n, t_np, t_nb, diff))
    return rows


def bench_rk4(steps, repeat):
    rows = []
    for n in steps:
        h = 1e-3
        s = np.arange(2 * n + 1) * (h / 2)
        gp, gm = np.cos(s), np.cos(-s)
        y0 = np.array([0.5, 0.5, 0.0, 0.0])
        args = (4.0, 2.0, h, gp, gm, y0)
        ref = kernels._rk4_sweep_loop(*args)
        t_py = best_of(lambda: kernels._rk4_sweep_loop(*args), max(1, repeat // 3))
        t_nb = diff = None
        if kernels.HAS_NUMBA:
            out = kernels.rk4_sweep(*args)
            diff = float(np.max(np.abs(out - ref)))
            t_nb = best_of(lambda: kernels.rk4_sweep(*args), repeat)
        rows.append(("rk4_sweep", n, t_py, t_nb, diff))
    return rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--quick", action="store_true", help="small sizes only")
    args = parser.parse_args(argv)

    sizes = [2_001, 16_001] if args.quick else [2_001, 16_001, 128_001, 1_024_001]
    steps = [1_000, 10_000] if args.quick else [1_000, 10_000, 40_000]
    rows = bench_convolve(sizes, args.repeat) + bench_rk4(steps, args.repeat)

    print(f"backend: {kernels.BACKEND}")
    print(f"{'kernel':<14}{'n':>10}{'fallback s':>14}{'numba s':>12}{'speedup':>10}{'max diff':>11}")
    for name, n, t_ref, t_nb, diff in rows:
        if t_nb is None:
            print(f"{name:<14}{n:>10}{t_ref:>14.3e}{'-':>12}{'-':>10}{'-':>11}")
        else:
            print(f"{name:<14}{n:>10}{t_ref:>14.3e}{t_nb:>12.3e}{t_ref / t_nb:>10.1f}{diff:>11.1e}")


if __name__ == "__main__":
    main()
