# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled occupation-basis kernels.

Same contract as :mod:`fermicone._kernels_py`; see that module for the
reference semantics.
"""
import math

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


def combination_masks(int n, int N):
    """All N-subsets of ``range(n)`` as bitmasks, lexicographic in the sorted index tuple."""
    if n < 0 or N < 0 or N > n or n > 63:
        raise ValueError(f"bad occupation shape n={n}, N={N}")
    cdef Py_ssize_t count = math.comb(n, N)
    out = np.empty(count, dtype=np.uint64)
    cdef uint64_t[::1] view = out
    cdef int idx[64]
    cdef int i, j
    cdef Py_ssize_t k
    cdef uint64_t mask
    for i in range(N):
        idx[i] = i
    with nogil:
        for k in range(count):
            mask = 0
            for i in range(N):
                mask |= (<uint64_t>1) << idx[i]
            view[k] = mask
            i = N - 1
            while i >= 0 and idx[i] == n - N + i:
                i -= 1
            if i < 0:
                break
            idx[i] += 1
            for j in range(i + 1, N):
                idx[j] = idx[j - 1] + 1
    return out


def masked_sums_int(const uint64_t[::1] masks, const int64_t[::1] values):
    """Per mask, the sum of ``values`` over its set bits (caller guarantees no overflow)."""
    cdef Py_ssize_t k, count = masks.shape[0]
    out = np.empty(count, dtype=np.int64)
    cdef int64_t[::1] view = out
    cdef uint64_t m
    cdef int64_t acc
    with nogil:
        for k in range(count):
            m = masks[k]
            acc = 0
            while m:
                acc += values[__builtin_ctzll(m)]
                m &= m - 1
            view[k] = acc
    return out


def masked_sums_float(const uint64_t[::1] masks, const double[::1] values):
    cdef Py_ssize_t k, count = masks.shape[0]
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] view = out
    cdef uint64_t m
    cdef double acc
    with nogil:
        for k in range(count):
            m = masks[k]
            acc = 0.0
            while m:
                acc += values[__builtin_ctzll(m)]
                m &= m - 1
            view[k] = acc
    return out


def subset_counts(const uint64_t[::1] masks, uint64_t subset):
    """Per mask, how many of its set bits fall inside ``subset``."""
    cdef Py_ssize_t k, count = masks.shape[0]
    out = np.empty(count, dtype=np.int64)
    cdef int64_t[::1] view = out
    with nogil:
        for k in range(count):
            view[k] = __builtin_popcountll(masks[k] & subset)
    return out
