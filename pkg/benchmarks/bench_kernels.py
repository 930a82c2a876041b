"""Time the numba and numpy kernel backends side by side.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--sizes 27 70 127 200]

Inputs are counting matrices of complexes of growing size. The first numba
call per shape is a warm-up (JIT compilation) and is not timed.
"""
import argparse
import time

import numpy as np

from kount import _kernels
from kount.complexes import generate_closure, random_complex, standard_complex
from kount.exact import _primes_below_2_24
from kount.matrices import counting_matrix


def complex_of_size(n):
    """A complex with roughly n simplices, deterministic."""
    fixed = {27: standard_complex("cross_polytope", 2),
             70: generate_closure([range(1, 6), range(5, 10), [1, 2, 8, 9]]),
             127: generate_closure([range(1, 8)])}
    if n in fixed:
        return fixed[n]
    seed = 0
    while True:
        X = random_complex(8, 12, seed)
        if abs(X.n - n) <= n // 10:
            return X
        seed += 1


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--sizes", type=int, nargs="+", default=[27, 70, 127, 200])
    ap.add_argument("--primes", type=int, default=8)
    args = ap.parse_args()
    backends = ["numpy"] + (["numba"] if _kernels._numba is not None else [])
    primes = np.array(_primes_below_2_24(args.primes), dtype=np.int64)

    print(f"{'kernel':<14}{'n':>6}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for size in args.sizes:
        K = counting_matrix(complex_of_size(size))
        a = K.entries.astype(np.float64)
        res = np.stack([K.entries.astype(np.int64) % p for p in primes])
        for kernel, fn in (("jacobi_eigh", lambda b: _kernels.jacobi_eigh(a, backend=b)),
                           ("charpoly_mod", lambda b: _kernels.charpoly_mod(res, primes, backend=b))):
            row = {}
            for b in backends:
                fn(b)  # warm-up
                row[b] = best_of(lambda: fn(b), args.repeat)
            speed = row["numpy"] / row["numba"] if "numba" in row else float("nan")
            print(f"{kernel:<14}{K.n:>6}" + "".join(f"{row[b]:>11.4f}s" for b in backends)
                  + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
