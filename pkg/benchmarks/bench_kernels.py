"""Benchmark: compiled geostat kernels vs the numpy fallback.

Run: python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from nutriquest.geostat import kernels


def time_call(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    impls = kernels.backends()
    if "compiled" not in impls:
        print("compiled extension not built; run pip install -e . first")
    rng = np.random.default_rng(0)

    print(f"{'kernel':<28} {'size':<24} " +
          " ".join(f"{name:>10}" for name in impls) +
          ("   speedup" if len(impls) == 2 else ""))
    print("-" * (54 + 11 * len(impls) + 10))

    for n_cells, n_points in ((400, 2_000), (2_500, 10_000), (10_000, 20_000)):
        side = int(np.sqrt(n_cells))
        cx = np.tile((np.arange(side) + 0.5) * 100.0, side)
        cy = np.repeat((np.arange(side) + 0.5) * 100.0, side)
        px = rng.uniform(0, side * 100.0, n_points)
        py = rng.uniform(0, side * 100.0, n_points)
        times = {name: time_call(mod.kde_grid, cx, cy, px, py, 500.0)
                 for name, mod in impls.items()}
        row = f"{'kde_grid':<28} {f'{n_cells} cells x {n_points} pts':<24} "
        row += " ".join(f"{times[name] * 1e3:>8.2f}ms" for name in impls)
        if len(times) == 2:
            row += f"   {times['pure'] / times['compiled']:>6.1f}x"
        print(row)

    for shape, radius in (((50, 50), 2), ((100, 100), 3), ((200, 200), 5)):
        values = rng.normal(size=shape)
        times = {name: time_call(mod.window_sums, values, radius)
                 for name, mod in impls.items()}
        row = f"{'window_sums':<28} {f'{shape[0]}x{shape[1]} r={radius}':<24} "
        row += " ".join(f"{times[name] * 1e3:>8.2f}ms" for name in impls)
        if len(times) == 2:
            row += f"   {times['pure'] / times['compiled']:>6.1f}x"
        print(row)

    print(f"\nactive backend at import: {kernels.BACKEND}")


if __name__ == "__main__":
    main()
