"""Pure-Python reference for the occupation-basis kernels.

Used when the compiled ``_kernels`` extension is unavailable, or when the
environment variable ``FERMICONE_PURE_PYTHON`` is set.
"""
from itertools import combinations

import numpy as np


def combination_masks(n, N):
    if n < 0 or N < 0 or N > n or n > 63:
        raise ValueError(f"bad occupation shape n={n}, N={N}")
    masks = [sum(1 << i for i in combo) for combo in combinations(range(n), N)]
    return np.array(masks, dtype=np.uint64)


def _bits(m):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def masked_sums_int(masks, values):
    vals = [int(v) for v in values]
    out = [sum(vals[i] for i in _bits(int(m))) for m in masks]
    return np.array(out, dtype=np.int64)


def masked_sums_float(masks, values):
    vals = [float(v) for v in values]
    out = [sum((vals[i] for i in _bits(int(m))), 0.0) for m in masks]
    return np.array(out, dtype=np.float64)


def subset_counts(masks, subset):
    subset = int(subset)
    return np.array([bin(int(m) & subset).count("1") for m in masks], dtype=np.int64)
