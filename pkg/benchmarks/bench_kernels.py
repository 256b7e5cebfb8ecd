"""Time the numba kernels against their numpy twins.

Run with ``python benchmarks/bench_kernels.py [--repeat 5]``.  The numba
timings exclude compilation (one warm-up call per kernel).
"""
import argparse
import timeit

import numpy as np

from tfdecay import _kernels


def cases(rng):
    x = np.linspace(-30, 30, 4001)
    coef = rng.normal(size=121) + 1j * rng.normal(size=121)
    la = -np.arange(201.0) ** 1.5 / 10
    ph = rng.uniform(-np.pi, np.pi, size=201)
    xl = np.concatenate([np.linspace(-20, 20, 2001), np.geomspace(25, 1e12, 400)])
    s = np.linspace(0, 20, 20001)
    t = np.linspace(0, 200, 2001)
    z = rng.normal(size=4000) * 3 + 1j * rng.normal(size=4000) * 3
    xd = np.linspace(-10, 10, 1001)
    wf = np.exp(-xd ** 2 / 2) * (xd[1] - xd[0]) + 0j
    xi = np.linspace(-6, 6, 801)
    return {
        "hermite_table(120, 4001 pts)": ("hermite_table", (120, x)),
        "hermite_sum(121 coef, 4001 pts)": ("hermite_sum", (coef, x)),
        "hermite_log_sum(201 terms, 2401 pts)": ("hermite_log_sum", (la, ph, xl, 1.0)),
        "grid_sup(20001 s, 2001 t)": ("grid_sup", (s, np.exp(s / 4), t)),
        "series_log_eval(201 terms, 4000 z)": ("series_log_eval", (la, ph, z)),
        "dft_sum(1001 x, 801 xi)": ("dft_sum", (xd, wf, xi)),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    print(f"{'kernel':40s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speed-up':>9s}")
    for label, (name, a) in cases(rng).items():
        fn_nb = getattr(_kernels, f"{name}_numba")
        fn_np = getattr(_kernels, f"{name}_numpy")
        fn_nb(*a)  # compile
        t_nb = min(timeit.repeat(lambda: fn_nb(*a), number=1, repeat=args.repeat))
        t_np = min(timeit.repeat(lambda: fn_np(*a), number=1, repeat=args.repeat))
        print(f"{label:40s} {1e3 * t_nb:11.2f} {1e3 * t_np:11.2f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
