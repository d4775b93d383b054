"""Time the numba kernels against their numpy fallbacks.

Both variants are called directly (``*_nb`` and ``*_np``), so the
GSTAB_DISABLE_NUMBA flag does not matter here.  One untimed call warms up
the JIT before the repeats.

Run:

    python benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import statistics
import time

import numpy as np

from gstab import _accel, kernels
from gstab.state import haar_random_state


def timeit(fn, repeats):
    fn()
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def cases():
    f10 = np.ascontiguousarray(haar_random_state(10, 0).amps)
    size = f10.shape[0]
    out = np.empty((size, size))
    f4 = np.ascontiguousarray(haar_random_state(4, 0).amps)
    r = np.random.default_rng(0)
    pts = np.unique(r.integers(0, 1 << 16, 3000)).astype(np.int64)
    rows = r.normal(size=(256, 4096))

    yield ("wht_rows 256x4096", lambda: kernels.wht_rows_nb(rows.copy()), lambda: kernels.wht_rows_np(rows.copy()))
    yield ("char_rows n=10", lambda: kernels.char_rows_nb(f10, 0, size, out),
           lambda: kernels.char_rows_np(f10, 0, size, out))
    yield ("gowers_sum n=4 k=4", lambda: kernels.gowers_sum_nb(f4, 4), lambda: kernels.gowers_sum_np(f4, 4))
    yield ("anticommutation |A|=3000", lambda: kernels.anticommutation_matrix_nb(pts, 8),
           lambda: kernels.anticommutation_matrix_np(pts, 8))
    yield ("sumset |A|=3000", lambda: kernels.sumset_indicator_nb(pts, pts, 1 << 16),
           lambda: kernels.sumset_indicator_np(pts, pts, 1 << 16))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        print("numba is not installed; only the numpy column is meaningful")
    print(f"{'kernel':<28}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name, nb, np_ in cases():
        t_nb = timeit(nb, args.repeats)
        t_np = timeit(np_, args.repeats)
        print(f"{name:<28}{t_nb:>12.4f}{t_np:>12.4f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
