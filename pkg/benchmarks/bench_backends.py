#!/usr/bin/env python3
"""Benchmark the value-recursion kernel: compiled backend vs numpy fallback.

Times the hot path (fleet arrays + recursion) on synthetic fleets of growing
size, checks both backends return the same optimum, and prints a table.

    python3 benchmarks/bench_backends.py --sizes 1000,10000,100000 --repeats 5
"""

import argparse
import statistics
import time

from platoon_coord import ScenarioConfig, generate, prepare_fleet
from platoon_coord.dp import run_dp
from platoon_coord.kernels import HAVE_NUMBA


def make_fleet(n_trucks, seed=0):
    cfg = ScenarioConfig(
        n_trucks=n_trucks,
        arrival_hi=max(1440, int(1.44 * n_trucks)),
        horizon=float(max(1440, int(1.44 * n_trucks)) + 60),
        seed=seed,
    )
    instance = generate(cfg)
    return prepare_fleet(instance), instance.route, instance.econ


def time_backend(prepared, route, econ, backend, repeats):
    import os

    os.environ["PLATOON_COORD_BACKEND"] = backend
    run_dp(prepared, route, econ, mode=0)  # warm-up / JIT compile
    samples = []
    state = None
    for _ in range(repeats):
        start = time.perf_counter()
        state = run_dp(prepared, route, econ, mode=0)
        samples.append(time.perf_counter() - start)
    os.environ.pop("PLATOON_COORD_BACKEND", None)
    return statistics.median(samples), state.values[-1]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="1000,10000,100000",
                        help="comma-separated fleet sizes")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",") if s]

    if not HAVE_NUMBA:
        print("numba not importable; timing the numpy fallback only")

    header = f"{'trucks':>8}  {'numpy':>12}  {'numba':>12}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        prepared, route, econ = make_fleet(n)
        t_np, v_np = time_backend(prepared, route, econ, "numpy", args.repeats)
        if HAVE_NUMBA:
            t_nb, v_nb = time_backend(prepared, route, econ, "numba", args.repeats)
            if abs(v_np - v_nb) > 1e-6:
                raise SystemExit(
                    f"backend mismatch at n={n}: numpy {v_np!r} vs numba {v_nb!r}"
                )
            print(f"{n:>8}  {t_np * 1e3:>10.2f}ms  {t_nb * 1e3:>10.2f}ms  "
                  f"{t_np / t_nb:>7.1f}x")
        else:
            print(f"{n:>8}  {t_np * 1e3:>10.2f}ms  {'-':>12}  {'-':>8}")


if __name__ == "__main__":
    main()
