"""Timing of the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel runs on the same inputs through both implementations; the
first numba call is made before timing so JIT compilation is excluded.
"""
import argparse
import time

import numpy as np

from isoembed.kernels import _numpy
from isoembed.samplers import random_fbp

try:
    from isoembed.kernels import _numba
except ImportError:  # pragma: no cover
    _numba = None


def _best(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(degree, points, seed=0):
    rng = np.random.default_rng(seed)
    b = random_fbp(rng, degree)
    z = 0.9 * np.exp(2j * np.pi * rng.random(points))
    t = np.exp(2j * np.pi * rng.random(points))
    theta = np.sort(rng.uniform(0, 2 * np.pi, points))
    start = float(_numpy.fbp_phase(b.zeros, b.mults, np.zeros(1))[0])
    targets = start + 2 * np.pi * (np.arange(degree) + 0.5)
    return {
        "fbp_eval": lambda m: m.fbp_eval(b.zeros, b.mults, b.factor_consts, b.gamma, z),
        "fbp_poisson": lambda m: m.fbp_poisson(b.zeros, b.mults, t),
        "fbp_phase": lambda m: m.fbp_phase(b.zeros, b.mults, theta),
        "circle_solve": lambda m: m.circle_solve(b.zeros, b.mults, targets),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _numba is None:
        print("numba not available; nothing to compare")
        return
    print(f"{'kernel':<14}{'degree':>7}{'points':>9}{'numpy [ms]':>13}{'numba [ms]':>13}{'speedup':>9}")
    for degree, points in ((4, 4096), (16, 4096), (32, 65536)):
        for name, fn in cases(degree, points).items():
            fn(_numba)  # compile
            a = _best(lambda: fn(_numpy), args.repeat)
            b = _best(lambda: fn(_numba), args.repeat)
            print(f"{name:<14}{degree:>7}{points:>9}{a * 1e3:>13.3f}{b * 1e3:>13.3f}{a / b:>9.1f}")


if __name__ == "__main__":
    main()
