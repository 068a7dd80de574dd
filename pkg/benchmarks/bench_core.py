"""Timing comparison of the compiled recurrence core and its numpy twin.

Run from the repository root:

    python3 benchmarks/bench_core.py

Each kernel is timed over repeated calls and the median per-call time is
reported for both implementations, along with the speedup.  The compiled
module must be built (pip install -e . does that); otherwise only the
numpy column is shown.
"""

import time

import numpy as np

from sphls import _core_py
from sphls import specfun as sf

try:
    from sphls import _core
except ImportError:
    _core = None


def median_time(fn, repeats=40):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return float(np.median(times))


def bench_pair(name, make_call):
    py_t = median_time(make_call(_core_py))
    if _core is None:
        print(f"{name:<44} numpy {py_t * 1e6:9.1f} us   compiled (not built)")
        return
    c_t = median_time(make_call(_core))
    ratio = py_t / c_t if c_t > 0 else float("inf")
    print(
        f"{name:<44} numpy {py_t * 1e6:9.1f} us   compiled {c_t * 1e6:9.1f} us"
        f"   x{ratio:.1f}"
    )


def main():
    rng = np.random.default_rng(20260822)
    t_small = np.ascontiguousarray(rng.uniform(-1.0, 1.0, 256))
    t_large = np.ascontiguousarray(rng.uniform(-1.0, 1.0, 4096))

    cases = [
        (
            "gegenbauer_table lmax=128 nodes=256",
            lambda mod: lambda: mod.gegenbauer_table(128, 1.0, t_small),
        ),
        (
            "gegenbauer_table lmax=128 nodes=4096",
            lambda mod: lambda: mod.gegenbauer_table(128, 2.5, t_large),
        ),
        (
            "chebyshev_limit_table lmax=128 nodes=4096",
            lambda mod: lambda: mod.chebyshev_limit_table(128, t_large),
        ),
    ]
    for num in (64, 256, 1024):
        alpha, beta = sf._jacobi_coeffs(num, 0.5, 0.5)
        alpha = np.ascontiguousarray(alpha)
        beta = np.ascontiguousarray(beta)
        cases.append(
            (
                f"jacobi_nodes_weights K={num}",
                lambda mod, a=alpha, b=beta: lambda: mod.jacobi_nodes_weights(
                    a, b, sf.NEWTON_TOL, sf.NEWTON_MAXIT
                ),
            )
        )

    print("median per-call times (lower is better)")
    for name, make_call in cases:
        bench_pair(name, make_call)


if __name__ == "__main__":
    main()
