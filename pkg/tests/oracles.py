"""Independent reference computations used by the tests.

Nothing here imports the library's enumeration or decomposition code; each
oracle recomputes from the definitions with itertools, numpy or scipy.
"""
import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog


def brute_levels(values, N):
    """Sorted ``[(eigenvalue, degeneracy)]`` over all N-subsets of orbitals."""
    counts = Counter(sum(c, Fraction(0)) for c in itertools.combinations(values, N))
    return sorted(counts.items())


def brute_states(values, N):
    """Map eigenvalue -> list of occupied-orbital tuples (1-based)."""
    out = {}
    for combo in itertools.combinations(range(1, len(values) + 1), N):
        out.setdefault(sum((values[i - 1] for i in combo), Fraction(0)), []).append(combo)
    return out


def lp_min_pairing(values, N):
    """min N * sum x_i d_i over 0 <= d_i <= 1/N, sum d_i = 1, by linear programming."""
    n = len(values)
    c = np.array([float(v) * N for v in values])
    res = linprog(c, A_eq=np.ones((1, n)), b_eq=[1.0], bounds=[(0, 1.0 / N)] * n, method="highs")
    assert res.status == 0
    return res.fun


def extreme_by_active_rank(values, N):
    """Is ``values`` on an extreme ray of the diagonal dual cone?

    The cone is {x : sum_{i in S} x_i >= 0 for every N-subset S}. For N < n
    it is pointed and a nonzero member spans an extreme ray exactly when the
    tight constraints have rank n - 1.
    """
    n = len(values)
    rows = []
    for S in itertools.combinations(range(n), N):
        if sum(values[i] for i in S) == 0:
            rows.append([1 if i in S else 0 for i in range(n)])
    if not rows:
        return n == 1
    return np.linalg.matrix_rank(np.array(rows, dtype=float)) == n - 1


def _perm_sign(p):
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def dense_antisymmetric(n, N, terms):
    """Dense tensor of sum c * e_{i1} ^ ... ^ e_{iN} (unnormalized antisymmetrization)."""
    psi = np.zeros((n,) * N, dtype=complex)
    for occ, coeff in terms:
        idx = [o - 1 for o in sorted(occ)]
        for p in itertools.permutations(range(N)):
            psi[tuple(idx[k] for k in p)] += _perm_sign(p) * coeff
    return psi


def dense_factor_dimension(n, N, terms):
    """dim {phi : phi ^ psi = 0} from the dense tensors, by SVD."""
    psi = dense_antisymmetric(n, N, terms)
    perms = [(p, _perm_sign(p)) for p in itertools.permutations(range(N + 1))]
    cols = []
    for a in range(n):
        t = np.multiply.outer(np.eye(n)[a], psi)
        anti = sum(s * np.transpose(t, p) for p, s in perms)
        cols.append(anti.ravel())
    mat = np.array(cols).T
    return n - np.linalg.matrix_rank(mat, tol=1e-9 * max(1.0, np.abs(mat).max()))


def comb(n, k):
    return math.comb(n, k) if 0 <= k <= n else 0
