"""Backtracking search for binary Golay pairs of a given length.

Elements are fixed in pairs from both ends inward; once positions i and
M-1-i are set, the lag M-1-i correlation sum is fully determined and must
vanish.  The first pair found (with a[0] = b[0] = 1) is printed together
with an independent AACF check.

    python scripts/find_binary_kernels.py 10 26
"""

import argparse
import time

import numba
import numpy as np

from golaybeam.sequences import golay_kernel, max_sidelobe


@numba.njit(cache=True)
def _lag_ok(a, b, m, i):
    tau = m - 1 - i
    s = 0
    for k in range(i + 1):
        s += a[k] * a[k + tau] + b[k] * b[k + tau]
    return s == 0


@numba.njit(cache=True)
def _all_lags_ok(a, b, m):
    for tau in range(1, m):
        s = 0
        for k in range(m - tau):
            s += a[k] * a[k + tau] + b[k] * b[k + tau]
        if s != 0:
            return False
    return True


@numba.njit(cache=True)
def _search(m):
    a = np.zeros(m, np.int64)
    b = np.zeros(m, np.int64)
    half = (m + 1) // 2
    choice = np.full(half, -1, np.int64)   # 4-bit code of the current level
    i = 0
    while i >= 0:
        choice[i] += 1
        j = m - 1 - i
        ncodes = 16 if i != j else 4
        if i == 0:
            ncodes = 4 if i != j else 1
        if choice[i] >= ncodes:
            choice[i] = -1
            i -= 1
            continue
        c = choice[i]
        if i == 0:
            a[0] = 1
            b[0] = 1
            a[j] = 1 - 2 * (c & 1)
            b[j] = 1 - 2 * ((c >> 1) & 1)
        elif i == j:
            a[i] = 1 - 2 * (c & 1)
            b[i] = 1 - 2 * ((c >> 1) & 1)
        else:
            a[i] = 1 - 2 * (c & 1)
            b[i] = 1 - 2 * ((c >> 1) & 1)
            a[j] = 1 - 2 * ((c >> 2) & 1)
            b[j] = 1 - 2 * ((c >> 3) & 1)
        if not _lag_ok(a, b, m, i):
            continue
        if i == half - 1:
            if _all_lags_ok(a, b, m):
                return a, b
            continue
        i += 1
    return a[:0], b[:0]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("lengths", type=int, nargs="+")
    args = ap.parse_args()
    for m in args.lengths:
        t = time.perf_counter()
        a, b = _search(m)
        dt = time.perf_counter() - t
        if a.size == 0:
            print(f"M={m}: no binary Golay pair ({dt:.1f} s)")
            continue
        s = max_sidelobe(a.astype(complex), b.astype(complex))
        print(f"M={m}: found in {dt:.1f} s, max sidelobe {s:g}")
        print("  a =", a.tolist())
        print("  b =", b.tolist())
        try:
            ka, kb = golay_kernel(m)
            print("  embedded kernel sidelobe:", max_sidelobe(ka, kb))
        except LookupError:
            pass


if __name__ == "__main__":
    main()
