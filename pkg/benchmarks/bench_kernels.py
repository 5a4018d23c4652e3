"""Compare the numba and numpy kernel paths.

    python3 benchmarks/bench_kernels.py            # per-kernel timings
    python3 benchmarks/bench_kernels.py --end-to-end

The end-to-end mode times one oracle curvature evaluation of the induced
metric in two subprocesses, one per TANBUNDLE_NUMBA setting, since the
backend is fixed at import time.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from tanbundle import _kernels as K

E2E = """
import time, numpy as np
from tanbundle import oracle, weights, base_geometry as bg, _kernels
man = bg.sphere(1.0, {m})
w = weights.cheeger_gromoll()
z = oracle.sample_z(man, 0, 0)
oracle.numeric_riemann_2m(man, w, z)
t0 = time.perf_counter()
for _ in range({reps}):
    oracle.numeric_riemann_2m(man, w, z)
print(_kernels.BACKEND, (time.perf_counter() - t0) / {reps})
"""


def inputs(n, rng):
    A = rng.normal(size=(n, n))
    g = A @ A.T + n * np.eye(n)
    dg = rng.normal(size=(n, n, n))
    dg = 0.5 * (dg + dg.transpose(0, 2, 1))
    gamma = rng.normal(size=(n, n, n))
    dgamma = rng.normal(size=(n, n, n, n))
    riem = rng.normal(size=(n, n, n, n))
    driem = rng.normal(size=(n, n, n, n, n))
    m = n // 2
    return {
        "christoffel": (np.linalg.inv(g), dg),
        "riemann": (gamma, dgamma),
        "nabla_riemann": (riem, driem, gamma),
        "scalar": (riem, np.linalg.inv(g)),
        "induced_metric": (g[:m, :m].copy(), gamma[:m, :m, :m].copy(), rng.normal(size=m), 0.7),
        "cyclic_sum": (dgamma[0],),
    }


def bench(n, number):
    rng = np.random.default_rng(0)
    rows = []
    for name, args in inputs(n, rng).items():
        nb = getattr(K, name + "_nb")
        np_ = getattr(K, name + "_np")
        nb(*args)  # compile outside the timing
        t_nb = min(timeit.repeat(lambda: nb(*args), number=number, repeat=3)) / number
        t_np = min(timeit.repeat(lambda: np_(*args), number=number, repeat=3)) / number
        rows.append((name, n, t_np * 1e6, t_nb * 1e6))
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[4, 6, 8])
    p.add_argument("--number", type=int, default=2000)
    p.add_argument("--end-to-end", action="store_true")
    p.add_argument("--reps", type=int, default=20)
    args = p.parse_args()

    if not K.HAVE_NUMBA:
        sys.exit("numba is not importable; nothing to compare")

    print(f"{'kernel':<16}{'n':>3}{'numpy us':>12}{'numba us':>12}{'speedup':>9}")
    for n in args.sizes:
        for name, size, t_np, t_nb in bench(n, args.number):
            print(f"{name:<16}{size:>3}{t_np:>12.2f}{t_nb:>12.2f}{t_np / t_nb:>9.1f}")

    if args.end_to_end:
        for m in (2, 3):
            for flag in ("1", "0"):
                env = dict(os.environ, TANBUNDLE_NUMBA=flag)
                out = subprocess.run(
                    [sys.executable, "-c", E2E.format(m=m, reps=args.reps)],
                    env=env, capture_output=True, text=True, check=True,
                ).stdout.split()
                print(f"numeric_riemann_2m m={m} backend={out[0]:<6} {float(out[1]) * 1e3:8.2f} ms")


if __name__ == "__main__":
    main()
