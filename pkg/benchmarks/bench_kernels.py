"""Time the compiled occupation-basis kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py --n 20 --N 10 --repeat 3
"""
import argparse
import time

import numpy as np

from fermicone.kernels import available_backends


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def run(n, N, repeat, seed):
    rng = np.random.default_rng(seed)
    ints = rng.integers(-1000, 1000, size=n).astype(np.int64)
    floats = rng.standard_normal(n)
    subset = np.uint64(int(rng.integers(0, 2**n)))
    backends = available_backends()
    results = {}
    for name, mod in backends.items():
        masks = mod.combination_masks(n, N)
        results[name] = {
            "combination_masks": best_of(lambda: mod.combination_masks(n, N), repeat),
            "masked_sums_int": best_of(lambda: mod.masked_sums_int(masks, ints), repeat),
            "masked_sums_float": best_of(lambda: mod.masked_sums_float(masks, floats), repeat),
            "subset_counts": best_of(lambda: mod.subset_counts(masks, subset), repeat),
        }
    print(f"n={n} N={N} states={len(masks)} repeat={repeat}")
    print(f"{'kernel':<20}" + "".join(f"{b:>12}" for b in backends) + ("    speedup" if len(backends) > 1 else ""))
    for kernel in results["python"]:
        row = f"{kernel:<20}" + "".join(f"{results[b][kernel][0] * 1e3:>10.2f}ms" for b in backends)
        if "compiled" in results:
            py, cy = results["python"][kernel], results["compiled"][kernel]
            if not np.array_equal(py[1], cy[1]) and not np.allclose(py[1], cy[1]):
                raise SystemExit(f"{kernel}: backends disagree")
            row += f"  {py[0] / max(cy[0], 1e-9):>8.1f}x"
        print(row)
    if "compiled" not in results:
        print("compiled extension not built; only the Python fallback was timed")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20)
    ap.add_argument("--N", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    run(args.n, args.N, args.repeat, args.seed)


if __name__ == "__main__":
    main()
