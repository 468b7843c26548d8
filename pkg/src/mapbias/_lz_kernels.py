"""Numba kernels for bulk LZ76 phrase counting over packed 64-bit strings.

The per-string scan is the Kaspar-Schuster formulation of the
exhaustive-history parsing; `complexity.lz76_phrase_count` holds the
pure-Python twin that the test suite checks both against a naive
substring-search oracle.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _phrase_count_u8(sym, n):
    if n == 1:
        return 1
    c = 1
    l = 1
    i = 0
    k = 1
    kmax = 1
    while True:
        if sym[i + k - 1] == sym[l + k - 1]:
            k += 1
            if l + k > n:
                c += 1
                break
        else:
            if k > kmax:
                kmax = k
            i += 1
            if i == l:
                c += 1
                l += kmax
                if l + 1 > n:
                    break
                i = 0
                k = 1
                kmax = 1
            else:
                k = 1
    return c


@njit(cache=True)
def phrase_counts_bidirectional(packed, n, out_fwd, out_rev):
    """Fill out_fwd/out_rev with phrase counts of each string and its reversal."""
    buf = np.empty(n, dtype=np.uint8)
    rbuf = np.empty(n, dtype=np.uint8)
    one = np.uint64(1)
    for idx in range(packed.size):
        word = packed[idx]
        for j in range(n):
            bit = np.uint8((word >> np.uint64(n - 1 - j)) & one)
            buf[j] = bit
            rbuf[n - 1 - j] = bit
        out_fwd[idx] = _phrase_count_u8(buf, n)
        out_rev[idx] = _phrase_count_u8(rbuf, n)
