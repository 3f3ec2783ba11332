"""Canonical decomposition of a dual-cone member into extreme elements.

The extreme rays of the cone are the rank-one projectors ``P_i`` and the
hole elements ``(1/N) I - P_i``. For a member spectrum sorted ascending the
decomposition keeps the ``r`` lowest orbitals as holes and the rest as
particles, with weights fixed by a single shift ``t``.
"""
from __future__ import annotations

import enum
from fractions import Fraction
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import InvalidArgument, NonUniqueIndex, NotInDualCone
from .fock import DEFAULT_BUDGET, _state_sums, full_spectrum
from .linalg import rank_exact, rank_float
from .numeric import DEFAULT_POLICY, NumericPolicy, Scalar, to_json_scalar
from .spectral import OneBodySpectrum, _check_particles, is_dual_cone_member


class ExtremeKind(enum.Enum):
    RANK_ONE_PROJECTOR = "rank_one_projector"
    HOLE_EXTREME = "hole_extreme"


@dataclass(frozen=True)
class ExtremeElement:
    kind: ExtremeKind
    label: int

    def spectrum(self, n: int, N: int, policy: NumericPolicy = DEFAULT_POLICY) -> OneBodySpectrum:
        """The element itself as a 1-particle spectrum over ``n`` orbitals."""
        if not 1 <= self.label <= n:
            raise InvalidArgument(f"orbital {self.label} outside 1..{n}")
        one = policy.one()
        if self.kind is ExtremeKind.RANK_ONE_PROJECTOR:
            vals = [one if k == self.label else policy.zero() for k in range(1, n + 1)]
        else:
            base = one / N
            vals = [base - one if k == self.label else base for k in range(1, n + 1)]
        return OneBodySpectrum.from_values(vals, policy)


@dataclass(frozen=True)
class CanonicalDecomposition:
    """Weights of the canonical decomposition.

    ``gammas`` and ``labels`` are in sorted-eigenvalue order: positions
    ``0..r-1`` carry hole elements, positions ``r..n-1`` rank-one projectors.
    """

    N: int
    n: int
    r: int
    s: int
    t: Scalar
    gammas: Tuple[Scalar, ...]
    labels: Tuple[int, ...]
    policy: NumericPolicy = DEFAULT_POLICY

    @property
    def holes(self) -> Tuple[int, ...]:
        return self.labels[: self.r]

    @property
    def particles(self) -> Tuple[int, ...]:
        return self.labels[self.r:]

    def gamma_by_label(self) -> Tuple[Scalar, ...]:
        out = [None] * self.n
        for g, lab in zip(self.gammas, self.labels):
            out[lab - 1] = g
        return tuple(out)

    def terms(self) -> List[Tuple[Scalar, ExtremeElement]]:
        kinds = [ExtremeKind.HOLE_EXTREME] * self.r + [ExtremeKind.RANK_ONE_PROJECTOR] * (self.n - self.r)
        return [(g, ExtremeElement(k, lab)) for g, k, lab in zip(self.gammas, kinds, self.labels)]

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "s": self.s,
            "t": to_json_scalar(self.t),
            "gammas": [to_json_scalar(g) for g in self.gammas],
            "gammas_by_label": [to_json_scalar(g) for g in self.gamma_by_label()],
            "holes": list(self.holes),
            "particles": list(self.particles),
        }


def _require_member(spec: OneBodySpectrum, N: int) -> None:
    verdict = is_dual_cone_member(spec, N)
    if not verdict:
        raise NotInDualCone(verdict.certificate, verdict.min_pairing)


def _split_candidates(spec: OneBodySpectrum, N: int):
    """Yield ``(r, t, lower_ok, upper_ok)`` for every r in [s, N-1].

    ``t = (sum of the r lowest values) / (N - r)``; the split at r is valid
    when ``t + x[r-1] < 0`` (vacuous at r = s) and ``t + x[r] >= 0``.
    """
    pol, x, s = spec.policy, spec.values, spec.s
    partial = sum(x[:s], pol.zero())
    for r in range(s, N):
        if r > s:
            partial += x[r - 1]
        t = partial / (N - r)
        lower = True if r == s else pol.is_negative(t + x[r - 1])
        upper = not pol.is_negative(t + x[r])
        yield r, t, lower, upper


def find_r(spec: OneBodySpectrum, N: int) -> Tuple[int, Scalar]:
    """Locate the hole/particle split ``r`` and the shift ``t``.

    Scans r upward from s and takes the first r whose upper inequality holds;
    the lower inequality is then asserted, and every other r in [s, N-1] is
    checked to fail, so a non-unique split raises :class:`NonUniqueIndex`.
    """
    _check_particles(spec, N)
    _require_member(spec, N)
    pol = spec.policy
    if spec.s == 0:
        return 0, pol.zero()
    candidates = list(_split_candidates(spec, N))
    chosen = next((c for c in candidates if c[3]), None)
    if chosen is None:
        raise NonUniqueIndex(f"no split index in [{spec.s}, {N - 1}] satisfies the upper inequality")
    r, t, lower, _ = chosen
    if not lower:
        raise NonUniqueIndex(
            f"split r={r}: lower inequality t + x_r < 0 fails (t={t}, x_r={spec.values[r - 1]})"
        )
    others = [c[0] for c in candidates if c[2] and c[3] and c[0] != r]
    if others:
        raise NonUniqueIndex(f"split indices {[r] + others} all satisfy both inequalities")
    return r, t


def canonical_decompose(spec: OneBodySpectrum, N: int) -> CanonicalDecomposition:
    r, t = find_r(spec, N)
    x, s = spec.values, spec.s
    gammas = tuple(-(t + v) for v in x[:r]) + tuple(t + v for v in x[r:])
    return CanonicalDecomposition(N, spec.n, r, s, t, gammas, spec.labels, spec.policy)


def reconstruct(d: CanonicalDecomposition, n: Optional[int] = None) -> OneBodySpectrum:
    """Evaluate ``sum_{i<=r} g_i ((1/N) I - P_i) + sum_{k>r} g_k P_k`` as a spectrum."""
    if n is not None and n != d.n:
        raise InvalidArgument(f"decomposition has {d.n} orbitals, asked for {n}")
    hole_share = sum(d.gammas[: d.r], d.policy.zero()) / d.N
    by_label = [None] * d.n
    for pos, (g, lab) in enumerate(zip(d.gammas, d.labels)):
        by_label[lab - 1] = hole_share - g if pos < d.r else hole_share + g
    return OneBodySpectrum.from_values(by_label, d.policy)


def kernel_dim_bound_check(spec: OneBodySpectrum, d: CanonicalDecomposition) -> bool:
    """Zero eigenvalues number at most ``r - s`` and sit only at sorted positions s+1..r.

    Only meaningful with a negative eigenvalue: for ``s = 0`` the decomposition
    is the plain spectral one and zero eigenvalues are unrestricted.
    """
    if d.s == 0:
        return True
    zeros = [p for p, v in enumerate(spec.values) if spec.policy.is_zero(v)]
    return len(zeros) <= d.r - d.s and all(d.s <= p < d.r for p in zeros)


def is_extreme(spec: OneBodySpectrum, N: int) -> Optional[Tuple[ExtremeElement, Scalar]]:
    """Match the spectrum against ``c P_i`` or ``c ((1/N) I - P_i)`` with ``c > 0``.

    Returns ``(element, c)`` or ``None``. With ``N == n >= 2`` the cone
    contains a line and has no extreme rays, so nothing matches.

    This is a pattern match against the two families. When ``n == N + 1``
    and ``N >= 2`` a rank-one projector equals the sum of the hole elements
    of the other orbitals, so it matches here without spanning an extreme
    ray; :func:`spans_extreme_ray` decides extremality itself.
    """
    _check_particles(spec, N)
    _require_member(spec, N)
    pol, x, n = spec.policy, spec.values, spec.n
    if N == n and n >= 2:
        return None
    nonzero = [p for p, v in enumerate(x) if not pol.is_zero(v)]
    if not nonzero:
        return None
    if len(nonzero) == 1 and pol.is_positive(x[nonzero[0]]):
        p = nonzero[0]
        return ExtremeElement(ExtremeKind.RANK_ONE_PROJECTOR, spec.labels[p]), x[p]
    if N >= 2 and spec.s == 1:
        w = x[1]
        if pol.is_positive(w) and all(pol.eq(v, w) for v in x[1:]) and pol.eq(x[0], -(N - 1) * w):
            return ExtremeElement(ExtremeKind.HOLE_EXTREME, spec.labels[0]), N * w
    return None


def spans_extreme_ray(spec: OneBodySpectrum, N: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Extremality decided from the active constraints of the diagonal cone.

    The cone is cut out by ``sum_{i in S} x_i >= 0`` over N-subsets S. For
    ``N < n`` it is pointed, and a nonzero member spans an extreme ray iff
    the constraints it meets with equality have rank ``n - 1``.
    """
    _check_particles(spec, N)
    _require_member(spec, N)
    pol, n = spec.policy, spec.n
    if N == n:
        return n == 1 and pol.is_positive(spec.values[0])
    masks, sums, den = _state_sums(spec, N, budget)
    tight = [int(m) for m, v in zip(masks, sums) if pol.is_zero(v if den is None else Fraction(int(v), den))]
    rows = [[(m >> i) & 1 for i in range(n)] for m in tight]
    if len(rows) == len(masks):
        return False  # the zero operator
    rank = rank_exact(rows, n) if pol.exact else rank_float(rows, pol.tol)
    return rank == n - 1


class KernelRelation(enum.Enum):
    EQUAL = "equal"
    A_IN_B = "A⊂B"
    B_IN_A = "B⊂A"
    INCOMPARABLE = "incomparable"


def kernel_compare(
    spec_a: OneBodySpectrum, spec_b: OneBodySpectrum, N: int, budget: int = DEFAULT_BUDGET
) -> KernelRelation:
    """Compare the zero-eigenvalue state sets of the two N-particle expansions."""
    if spec_a.n != spec_b.n:
        raise InvalidArgument(f"orbital counts differ: {spec_a.n} vs {spec_b.n}")
    _require_member(spec_a, N)
    _require_member(spec_b, N)
    ka = full_spectrum(spec_a, N, budget).kernel_masks()
    kb = full_spectrum(spec_b, N, budget).kernel_masks()
    if ka == kb:
        return KernelRelation.EQUAL
    if ka < kb:
        return KernelRelation.A_IN_B
    if kb < ka:
        return KernelRelation.B_IN_A
    return KernelRelation.INCOMPARABLE
