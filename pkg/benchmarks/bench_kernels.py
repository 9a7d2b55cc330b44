"""Benchmark the compiled kernels against the pure numpy fallback.

Times the two hot operations of the search loop (the skew exponential and
the pair statistics) at the small matrix sizes the search actually visits.
Run from the repository root:

    python3 benchmarks/bench_kernels.py --sizes 2,4,8,16 --reps 2000
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from seqmeas import _fallback, kernels


def _inputs(dim: int, seed: int):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    k = np.ascontiguousarray(z - z.conj().T)
    q, _ = np.linalg.qr(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    f = q[:, : max(dim // 2, 1)]
    p = np.ascontiguousarray(f @ f.conj().T)
    u = np.ascontiguousarray(q)
    return k, p, u


def _time(fn, reps: int) -> float:
    best = min(timeit.repeat(fn, number=reps, repeat=3))
    return best / reps


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="2,4,8,16", help="comma list of matrix sizes")
    parser.add_argument("--reps", type=int, default=2000, help="repetitions per measurement")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    print(f"active backend: {kernels.BACKEND}")
    if kernels.BACKEND != "compiled":
        print("note: compiled extension unavailable, timing the fallback against itself")
    header = f"{'op':<11}{'n':>4}{'compiled us':>14}{'fallback us':>14}{'speedup':>9}"
    print(header)
    print("-" * len(header))
    for dim in sizes:
        k, p, u = _inputs(dim, args.seed)
        t_c = _time(lambda: kernels.expm_skew(k), args.reps)
        t_f = _time(lambda: _fallback.expm_skew(k), args.reps)
        print(f"{'expm_skew':<11}{dim:>4}{t_c * 1e6:>14.2f}{t_f * 1e6:>14.2f}{t_f / t_c:>9.2f}")
        t_c = _time(lambda: kernels.pair_stats(p, u, p, u), args.reps)
        t_f = _time(lambda: _fallback.pair_stats(p, u, p, u), args.reps)
        print(f"{'pair_stats':<11}{dim:>4}{t_c * 1e6:>14.2f}{t_f * 1e6:>14.2f}{t_f / t_c:>9.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
