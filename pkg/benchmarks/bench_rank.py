"""Compare the compiled elimination kernel with the numpy fallback.

    python benchmarks/bench_rank.py [--sizes 200,400,800] [--repeat 3]
"""
import argparse
import time

import numpy as np

from rigidacm import fieldlinalg as fl

P = fl.random_prime(0)


def random_matrix(n: int, rank: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    # product of n x rank and rank x n factors, so the rank is known
    u = rng.integers(0, 1000, size=(n, rank), dtype=np.int64)
    v = rng.integers(0, 1000, size=(rank, n), dtype=np.int64)
    return (u @ v) % P if rank else np.zeros((n, n), dtype=np.int64)


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="200,400,800")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not fl.compiled_available():
        print("compiled kernel not built; only the numpy fallback is timed")
    print(f"prime {P}")
    print(f"{'n':>6} {'rank':>6} {'numpy [s]':>10} {'compiled [s]':>13} {'speedup':>8}")
    for n in (int(x) for x in args.sizes.split(",")):
        a = random_matrix(n, n - n // 10, seed=n)
        ref = fl.rank_mod_p_dense_numpy(a.copy(), P)
        t_np = best_of(lambda: fl.rank_mod_p_dense_numpy(a.copy(), P), args.repeat)
        if fl.compiled_available():
            from rigidacm._rank_kernel import rank_mod_p

            assert rank_mod_p(a.copy(), P) == ref
            t_c = best_of(lambda: rank_mod_p(a.copy(), P), args.repeat)
            print(f"{n:>6} {ref:>6} {t_np:>10.4f} {t_c:>13.4f} {t_np / t_c:>7.1f}x")
        else:
            print(f"{n:>6} {ref:>6} {t_np:>10.4f} {'-':>13} {'-':>8}")


if __name__ == "__main__":
    main()
