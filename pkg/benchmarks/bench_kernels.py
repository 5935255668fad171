"""Benchmark the compiled kernel extension against its pure-Python twin.

Times the scalar profile evaluation, a single shooting integration, a full
eigenvalue solve, and one eigenvalue-comparison check on each backend, then
prints a table with speedups. Run as:

    python benchmarks/bench_kernels.py
"""

import math
import time

from collargeo import kernels
from collargeo.checks import check_eigenvalue_bound
from collargeo.densities import DensityProfile
from collargeo.eigen import principal_eigenvalue
from collargeo.fixtures import perturbed_warp_collar


def time_call(fn, min_time=0.2):
    fn()  # warm up
    best = math.inf
    total = 0.0
    while total < min_time:
        start = time.perf_counter()
        fn()
        elapsed = time.perf_counter() - start
        best = min(best, elapsed)
        total += elapsed
    return best


def bench_s_pair(backend):
    def run():
        s_pair = backend.s_pair
        for i in range(20_000):
            s_pair(-1.0, 0.5, 1e-4 * i)

    return time_call(run) / 20_000


def bench_shoot(backend):
    handle = backend.make_density(backend.KIND_MODEL, nexp=2.0, kappa=-1.0, lam=0.5)

    def run():
        backend.shoot(2.0, 4.0, 1.0, handle, 1e-10, 1e-12, 0, 0)

    return time_call(run)


def bench_solve():
    density = DensityProfile.model(3.0, -1.0, 0.5)

    def run():
        principal_eigenvalue(2.0, density, 1.0)

    return time_call(run)


def bench_check():
    M, meta = perturbed_warp_collar(0)

    def run():
        check_eigenvalue_bound(M, 2.0, meta["N"], meta["kappa"], meta["lam"])

    return time_call(run)


def main():
    names = kernels.available_backends()
    if "compiled" not in names:
        print("compiled backend unavailable; nothing to compare")
    rows = []
    results = {}
    for name in names:
        backend = kernels.get_backend(name)
        kernels.set_backend(name)
        results[name] = {
            "scalar profile eval": bench_s_pair(backend),
            "single shot (model density)": bench_shoot(backend),
            "eigenvalue solve": bench_solve(),
            "eigenvalue comparison check": bench_check(),
        }
    kernels.set_backend("compiled" if "compiled" in names else "pure")

    tasks = list(next(iter(results.values())))
    width = max(len(t) for t in tasks)
    header = f"{'task':<{width}}"
    for name in names:
        header += f"  {name:>12}"
    if len(names) == 2:
        header += f"  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for task in tasks:
        row = f"{task:<{width}}"
        for name in names:
            row += f"  {results[name][task] * 1e3:>10.3f}ms"
        if len(names) == 2:
            ratio = results["pure"][task] / results["compiled"][task]
            row += f"  {ratio:>7.1f}x"
        print(row)
        rows.append(row)

    # the two backends must agree bitwise on a reference solve
    density = DensityProfile.model(3.0, -1.0, 0.5)
    mus = {}
    for name in names:
        kernels.set_backend(name)
        mus[name] = principal_eigenvalue(2.0, density, 1.0).mu
    kernels.set_backend("compiled" if "compiled" in names else "pure")
    values = set(mus.values())
    print(f"\nreference eigenvalue: {mus} -> {'identical' if len(values) == 1 else 'MISMATCH'}")
    if len(values) != 1:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
