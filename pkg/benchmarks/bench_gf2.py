"""Benchmark the batch GF(2) rank kernel: compiled vs pure-Python path.

Usage:
    python3 benchmarks/bench_gf2.py [--n 65536] [--shape 4x4] [--repeat 3]

The same comparison can be forced process-wide with NLBOX_NO_NUMBA=1,
which disables the compiled path at import time; this script instead
selects each backend explicitly so both run in one process.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from nlbox import gf2


def bench(backend: str, masks: np.ndarray, n_rows: int, n_cols: int,
          repeat: int) -> float:
    # warm-up (includes JIT compilation for the numba path)
    gf2.rank_batch_masks(masks[:16], n_rows, n_cols, backend=backend)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        gf2.rank_batch_masks(masks, n_rows, n_cols, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=65536,
                    help="number of matrices (default: all 4x4, 65536)")
    ap.add_argument("--shape", default="4x4")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    n_rows, n_cols = (int(v) for v in args.shape.split("x"))
    n = min(args.n, 1 << (n_rows * n_cols))
    masks = np.arange(n, dtype=np.int64)

    t_py = bench("python", masks, n_rows, n_cols, args.repeat)
    print(f"python  backend: {n} ranks of {args.shape} in {t_py:.4f}s "
          f"({n / t_py:,.0f}/s)")
    if gf2.HAVE_NUMBA:
        t_nb = bench("numba", masks, n_rows, n_cols, args.repeat)
        ok = np.array_equal(
            gf2.rank_batch_masks(masks, n_rows, n_cols, backend="python"),
            gf2.rank_batch_masks(masks, n_rows, n_cols, backend="numba"))
        print(f"numba   backend: {n} ranks of {args.shape} in {t_nb:.4f}s "
              f"({n / t_nb:,.0f}/s)")
        print(f"speedup: {t_py / t_nb:.1f}x   results-identical: {ok}")
    else:
        print("numba   backend: unavailable (NLBOX_NO_NUMBA set or not installed)")


if __name__ == "__main__":
    main()
