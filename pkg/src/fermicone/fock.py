"""Occupation-number basis, diagonal N-particle operators and the many-body spectrum.

Every N-particle operator in this package is diagonal in the determinant
basis built from the 1-particle eigenbasis, so an operator is just a vector
of entries over the ``C(n, N)`` occupation states. States are bitmasks; bit
``i - 1`` set means orbital label ``i`` is occupied. The basis is ordered
lexicographically by the sorted tuple of occupied orbitals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import FrozenSet, Iterable, List, Tuple

import numpy as np

from . import kernels
from .errors import BudgetExceeded, InvalidArgument
from .numeric import DEFAULT_POLICY, NumericPolicy, Scalar, common_denominator
from .spectral import OneBodySpectrum

DEFAULT_BUDGET = 10**7
MAX_ORBITALS = 63
_INT64_HEADROOM = 2**62


@dataclass(frozen=True, order=True)
class OccupationState:
    bits: int
    n: int
    N: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.n:
            raise InvalidArgument(f"bits {self.bits:b} do not fit in {self.n} orbitals")
        if bin(self.bits).count("1") != self.N:
            raise InvalidArgument(f"bits {self.bits:b} do not hold {self.N} particles")

    @classmethod
    def from_orbitals(cls, orbitals: Iterable[int], n: int) -> "OccupationState":
        orbs = list(orbitals)
        if len(set(orbs)) != len(orbs):
            raise InvalidArgument(f"repeated orbital in {orbs}")
        bits = 0
        for o in orbs:
            if not 1 <= o <= n:
                raise InvalidArgument(f"orbital {o} outside 1..{n}")
            bits |= 1 << (o - 1)
        return cls(bits, n, len(orbs))

    @property
    def occupied(self) -> Tuple[int, ...]:
        return tuple(i + 1 for i in range(self.n) if self.bits >> i & 1)

    def __contains__(self, label: int) -> bool:
        return bool(self.bits >> (label - 1) & 1)

    def __str__(self):
        return format(self.bits, f"0{self.n}b")


def basis_size(n: int, N: int, budget: int = DEFAULT_BUDGET) -> int:
    if not (0 <= N <= n):
        raise InvalidArgument(f"need 0 <= N <= n, got n={n}, N={N}")
    if n > MAX_ORBITALS:
        raise InvalidArgument(f"at most {MAX_ORBITALS} orbitals are supported, got {n}")
    count = math.comb(n, N)
    if count > budget:
        raise BudgetExceeded(n, N, count, budget)
    return count


@lru_cache(maxsize=32)
def _masks(n: int, N: int) -> np.ndarray:
    masks = kernels.combination_masks(n, N)
    masks.setflags(write=False)
    return masks


def basis_masks(n: int, N: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Read-only uint64 array of all occupation masks in basis order."""
    basis_size(n, N, budget)
    return _masks(n, N)


@lru_cache(maxsize=32)
def _index(n: int, N: int) -> dict:
    return {int(m): k for k, m in enumerate(_masks(n, N))}


def state_index(state: OccupationState) -> int:
    basis_size(state.n, state.N, DEFAULT_BUDGET)
    return _index(state.n, state.N)[state.bits]


def enumerate_states(n: int, N: int, budget: int = DEFAULT_BUDGET) -> List[OccupationState]:
    return [OccupationState(int(m), n, N) for m in basis_masks(n, N, budget)]


class DiagonalOperator:
    """An N-particle operator that is diagonal in the occupation basis.

    ``entries[k]`` is the eigenvalue on the k-th basis state. Arithmetic is
    entrywise; ``==`` compares under the operator's numeric policy.
    """

    __slots__ = ("n", "N", "entries", "policy")

    def __init__(self, n: int, N: int, entries, policy: NumericPolicy = DEFAULT_POLICY):
        arr = np.array(entries, dtype=policy.dtype)
        if arr.shape != (math.comb(n, N),):
            raise InvalidArgument(
                f"expected {math.comb(n, N)} entries for n={n}, N={N}, got shape {arr.shape}"
            )
        arr.setflags(write=False)
        self.n, self.N, self.entries, self.policy = n, N, arr, policy

    @classmethod
    def constant(cls, n, N, value, policy: NumericPolicy = DEFAULT_POLICY, budget=DEFAULT_BUDGET):
        count = basis_size(n, N, budget)
        arr = np.empty(count, dtype=policy.dtype)
        arr[:] = policy.coerce(value)
        return cls(n, N, arr, policy)

    def _check(self, other: "DiagonalOperator"):
        if (self.n, self.N) != (other.n, other.N):
            raise InvalidArgument(
                f"operator shapes differ: (n={self.n}, N={self.N}) vs (n={other.n}, N={other.N})"
            )

    def __add__(self, other):
        if not isinstance(other, DiagonalOperator):
            return NotImplemented
        self._check(other)
        return DiagonalOperator(self.n, self.N, self.entries + other.entries, self.policy)

    def __sub__(self, other):
        if not isinstance(other, DiagonalOperator):
            return NotImplemented
        self._check(other)
        return DiagonalOperator(self.n, self.N, self.entries - other.entries, self.policy)

    def __neg__(self):
        return DiagonalOperator(self.n, self.N, -self.entries, self.policy)

    def __mul__(self, c):
        if isinstance(c, DiagonalOperator):
            return NotImplemented
        return DiagonalOperator(self.n, self.N, self.entries * self.policy.coerce(c), self.policy)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return DiagonalOperator(self.n, self.N, self.entries / self.policy.coerce(c), self.policy)

    def equals(self, other: "DiagonalOperator") -> bool:
        if (self.n, self.N) != (other.n, other.N):
            return False
        if self.policy.exact and other.policy.exact:
            return bool(np.all(self.entries == other.entries))
        eq = self.policy.eq
        return all(eq(float(a), float(b)) for a, b in zip(self.entries, other.entries))

    def __eq__(self, other):
        if not isinstance(other, DiagonalOperator):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __getitem__(self, state: OccupationState) -> Scalar:
        if (state.n, state.N) != (self.n, self.N):
            raise InvalidArgument("state does not belong to this operator's basis")
        return self.entries[_index(self.n, self.N)[state.bits]]

    def support(self) -> np.ndarray:
        """Boolean mask of basis states with a nonzero entry."""
        return np.array([not self.policy.is_zero(x) for x in self.entries], dtype=bool)

    def rank(self) -> int:
        return int(self.support().sum())

    def is_psd(self) -> bool:
        return not any(self.policy.is_negative(x) for x in self.entries)

    def __repr__(self):
        return f"DiagonalOperator(n={self.n}, N={self.N}, dim={len(self.entries)})"


@dataclass(frozen=True)
class WedgeProjector:
    """Projector onto states with exactly ``j`` particles inside orbital set ``subset``."""

    subset: FrozenSet[int]
    j: int

    def __post_init__(self):
        object.__setattr__(self, "subset", frozenset(self.subset))
        if self.j < 0:
            raise InvalidArgument("occupancy count j must be nonnegative")


@dataclass(frozen=True)
class Level:
    eigenvalue: Scalar
    degeneracy: int
    states: np.ndarray  # uint64 masks in basis order
    n: int
    N: int

    @property
    def representatives(self) -> List[OccupationState]:
        return [OccupationState(int(m), self.n, self.N) for m in self.states]


@dataclass(frozen=True)
class ManyBodySpectrum:
    n: int
    N: int
    levels: Tuple[Level, ...]
    policy: NumericPolicy = DEFAULT_POLICY

    @property
    def lowest(self) -> Scalar:
        return self.levels[0].eigenvalue

    @property
    def kernel(self):
        """The level at eigenvalue zero, or ``None``."""
        for lvl in self.levels:
            if self.policy.is_zero(lvl.eigenvalue):
                return lvl
        return None

    def kernel_masks(self) -> FrozenSet[int]:
        k = self.kernel
        return frozenset() if k is None else frozenset(int(m) for m in k.states)

    def is_psd(self) -> bool:
        return not self.policy.is_negative(self.lowest)

    def values(self) -> List[Scalar]:
        return [lvl.eigenvalue for lvl in self.levels]


def _check_spec(spec: OneBodySpectrum, N: int, budget: int) -> np.ndarray:
    if not isinstance(N, int) or N < 0:
        raise InvalidArgument(f"particle number must be a nonnegative integer, got {N!r}")
    return basis_masks(spec.n, N, budget)


def _state_sums(spec: OneBodySpectrum, N: int, budget: int):
    """Raw many-body eigenvalues in basis order.

    Rational spectra are scaled to a common denominator ``den`` so the sums
    are exact integers; float spectra are summed directly (``den`` is None).
    """
    masks = _check_spec(spec, N, budget)
    vals = spec.by_label()
    if not spec.policy.exact:
        return masks, kernels.masked_sums_float(masks, np.asarray(vals, dtype=np.float64)), None
    den = common_denominator(vals)
    ints = [v.numerator * (den // v.denominator) for v in vals]
    if max((abs(x) for x in ints), default=0) * max(N, 1) < _INT64_HEADROOM:
        sums = kernels.masked_sums_int(masks, np.asarray(ints, dtype=np.int64))
    else:
        sums = np.empty(len(masks), dtype=object)
        sums[:] = [sum(ints[i] for i in range(spec.n) if int(m) >> i & 1) for m in masks]
    return masks, sums, den


def many_body_eigenvalue(spec: OneBodySpectrum, occ: OccupationState) -> Scalar:
    """Sum of the 1-particle eigenvalues over the occupied orbitals."""
    if occ.n != spec.n:
        raise InvalidArgument(f"state has {occ.n} orbitals, spectrum has {spec.n}")
    vals = spec.by_label()
    return sum((vals[i - 1] for i in occ.occupied), spec.policy.zero())


def build_one_body_diagonal(
    spec: OneBodySpectrum, N: int, budget: int = DEFAULT_BUDGET
) -> DiagonalOperator:
    """The N-particle expansion of the 1-particle operator, as a diagonal operator."""
    masks, sums, den = _state_sums(spec, N, budget)
    if den is None:
        return DiagonalOperator(spec.n, N, sums, spec.policy)
    uniq, inverse = np.unique(sums, return_inverse=True)
    fracs = np.empty(len(uniq), dtype=object)
    fracs[:] = [Fraction(int(u), den) for u in uniq]
    return DiagonalOperator(spec.n, N, fracs[inverse.reshape(-1)], spec.policy)


def full_spectrum(spec: OneBodySpectrum, N: int, budget: int = DEFAULT_BUDGET) -> ManyBodySpectrum:
    """Group all C(n, N) determinant eigenvalues into sorted levels.

    In float mode a level absorbs every following value that is equal (under
    the policy tolerance) to the level's first value.
    """
    masks, sums, den = _state_sums(spec, N, budget)
    levels = []
    if den is not None:
        uniq, inverse = np.unique(sums, return_inverse=True)
        inverse = inverse.reshape(-1)
        order = np.argsort(inverse, kind="stable")
        bounds = np.searchsorted(inverse[order], np.arange(len(uniq) + 1))
        for u, lo, hi in zip(uniq, bounds[:-1], bounds[1:]):
            idx = order[lo:hi]
            levels.append(Level(Fraction(int(u), den), int(hi - lo), masks[idx], spec.n, N))
    else:
        order = np.argsort(sums, kind="stable")
        eq = spec.policy.eq
        start = 0
        for k in range(1, len(order) + 1):
            if k == len(order) or not eq(float(sums[order[k]]), float(sums[order[start]])):
                idx = np.sort(order[start:k])
                levels.append(Level(float(sums[order[start]]), k - start, masks[idx], spec.n, N))
                start = k
    return ManyBodySpectrum(spec.n, N, tuple(levels), spec.policy)


def _subset_mask(subset: Iterable[int], n: int) -> int:
    mask = 0
    for o in subset:
        if not 1 <= o <= n:
            raise InvalidArgument(f"orbital {o} outside 1..{n}")
        mask |= 1 << (o - 1)
    return mask


def wedge_projector_realize(
    p: WedgeProjector, n: int, N: int, policy: NumericPolicy = DEFAULT_POLICY,
    budget: int = DEFAULT_BUDGET,
):
    """Indicator of ``|occ & S| == j`` plus its closed-form rank ``C(|S|, j) C(n-|S|, N-j)``."""
    masks = basis_masks(n, N, budget)
    counts = kernels.subset_counts(masks, np.uint64(_subset_mask(p.subset, n)))
    ind = (counts == p.j).astype(np.int64)
    k = len(p.subset)
    rank = math.comb(k, p.j) * math.comb(n - k, N - p.j) if p.j <= N else 0
    return DiagonalOperator(n, N, [policy.coerce(int(x)) for x in ind], policy), rank


def verify_partition(S: Iterable[int], n: int, N: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Check that the projectors for j = 0..N are disjoint, cover the basis, and have the predicted ranks."""
    S = frozenset(S)
    masks = basis_masks(n, N, budget)
    counts = kernels.subset_counts(masks, np.uint64(_subset_mask(S, n)))
    cover = np.zeros(len(masks), dtype=np.int64)
    total = 0
    for j in range(N + 1):
        ind = counts == j
        predicted = math.comb(len(S), j) * math.comb(n - len(S), N - j)
        if int(ind.sum()) != predicted:
            return False
        cover += ind
        total += predicted
    return bool(np.all(cover == 1)) and total == math.comb(n, N)


def number_operator(label: int, n: int, N: int, policy: NumericPolicy = DEFAULT_POLICY) -> DiagonalOperator:
    """Occupancy of orbital ``label`` (entries 0/1)."""
    return wedge_projector_realize(WedgeProjector({label}, 1), n, N, policy)[0]


def identity_operator(n: int, N: int, policy: NumericPolicy = DEFAULT_POLICY) -> DiagonalOperator:
    return DiagonalOperator.constant(n, N, 1, policy)

