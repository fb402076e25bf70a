"""Benchmark the jit-compiled kernels against their pure-numpy twins.

Run with the default environment to compare both paths in one process; the
jitted functions are compiled on first call, so a warmup round precedes
timing.  Also times one full case-study integration with whichever kernel
path is active (set SPDFLOW_NO_NUMBA=1 to time the fallback).
"""

import timeit

import numpy as np

from spdflow import kernels
from spdflow.integrators import get_stepper, integrate
from spdflow.models import make_case_study


def bench(label, fn, number):
    t = timeit.timeit(fn, number=number) / number
    print(f"{label:38s} {t * 1e6:10.2f} us/call")
    return t


def main():
    rng = np.random.default_rng(0)
    sizes = (2, 4, 8, 16)
    print(f"numba enabled: {kernels.NUMBA_ENABLED}")

    for n in sizes:
        M = rng.standard_normal((n, n))
        theta = rng.standard_normal((n, n)) * 0.3
        A = rng.standard_normal((n, n))
        number = 2000 if n <= 8 else 500

        kernels.expm_py(M)
        t_py = bench(f"expm  n={n:2d}  numpy", lambda: kernels.expm_py(M), number)
        if kernels.expm_jit is not None:
            kernels.expm_jit(M)  # compile
            t_jit = bench(
                f"expm  n={n:2d}  numba", lambda: kernels.expm_jit(M), number
            )
            print(f"{'':38s}    speedup {t_py / t_jit:5.2f}x")

        t_py = bench(
            f"dexpinv n={n:2d} numpy",
            lambda: kernels.dexpinv_py(theta, A, 4),
            number,
        )
        if kernels.dexpinv_jit is not None:
            kernels.dexpinv_jit(theta, A, 4)
            t_jit = bench(
                f"dexpinv n={n:2d} numba",
                lambda: kernels.dexpinv_jit(theta, A, 4),
                number,
            )
            print(f"{'':38s}    speedup {t_py / t_jit:5.2f}x")

    p = make_case_study("case1")
    model, grid = p.model(), p.grid()
    stepper = get_stepper("rkmk4")
    integrate(stepper, model, p.P0, grid)  # warm
    bench("rkmk4 case1 trajectory (30 pts)",
          lambda: integrate(stepper, model, p.P0, grid), 20)


if __name__ == "__main__":
    main()
