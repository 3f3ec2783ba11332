"""Small rank computations: exact elimination over the rationals, SVD for floats."""
from __future__ import annotations

from fractions import Fraction

import numpy as np


def rank_exact(rows, ncols: int) -> int:
    """Rank of a rational matrix by Gaussian elimination on Fractions."""
    mat = [[Fraction(x) for x in row] for row in rows if any(row)]
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        prow = mat[rank]
        inv = 1 / prow[col]
        for i in range(rank + 1, len(mat)):
            row = mat[i]
            f = row[col] * inv
            if f:
                for c in range(col, ncols):
                    row[c] -= f * prow[c]
        rank += 1
        if rank == len(mat):
            break
    return rank


def rank_complex_exact(re_rows, im_rows, ncols: int) -> int:
    """Complex rank via the real embedding ``[[A, -B], [B, A]]``, whose rank is twice it."""
    if not any(any(r) for r in im_rows):
        return rank_exact(re_rows, ncols)
    block = [list(a) + [-x for x in b] for a, b in zip(re_rows, im_rows)]
    block += [list(b) + list(a) for a, b in zip(re_rows, im_rows)]
    return rank_exact(block, 2 * ncols) // 2


def rank_float(matrix, tol: float) -> int:
    m = np.asarray(matrix)
    if m.size == 0:
        return 0
    smax = np.linalg.norm(m, 2)
    return int(np.linalg.matrix_rank(m, tol=tol * max(1.0, smax)))
