"""One-particle spectral data and dual-cone / N-representability membership.

A self-adjoint 1-particle operator is handled through its eigenvalues only:
every construction downstream lives in its eigenbasis. The eigenvalues are
kept sorted (negative block first) while ``labels`` remembers which input
orbital each sorted position came from.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .errors import InvalidArgument
from .numeric import DEFAULT_POLICY, NumericPolicy, Scalar


@dataclass(frozen=True)
class OneBodySpectrum:
    n: int
    values: Tuple[Scalar, ...]
    s: int
    labels: Tuple[int, ...]
    policy: NumericPolicy = DEFAULT_POLICY

    @classmethod
    def from_values(cls, raw: Sequence, policy: NumericPolicy = DEFAULT_POLICY) -> "OneBodySpectrum":
        """Sort ``raw`` (stable, so ties keep input order) and count strict negatives.

        Zero eigenvalues count with the nonnegative block.
        """
        if len(raw) == 0:
            raise InvalidArgument("spectrum needs at least one eigenvalue")
        vals = [policy.coerce(v) for v in raw]
        order = sorted(range(len(vals)), key=lambda i: vals[i])
        values = tuple(vals[i] for i in order)
        s = sum(1 for v in values if policy.is_negative(v))
        return cls(len(vals), values, s, tuple(i + 1 for i in order), policy)

    def by_label(self) -> Tuple[Scalar, ...]:
        """Eigenvalues in the caller's original orbital order."""
        out = [None] * self.n
        for v, lab in zip(self.values, self.labels):
            out[lab - 1] = v
        return tuple(out)

    def value_of(self, label: int) -> Scalar:
        return self.values[self.labels.index(label)]

    def scaled(self, c) -> "OneBodySpectrum":
        c = self.policy.coerce(c)
        if not c > 0:
            raise InvalidArgument("scale factor must be positive")
        return OneBodySpectrum.from_values([c * v for v in self.by_label()], self.policy)

    def equals(self, other: "OneBodySpectrum") -> bool:
        """Label-wise equality under this spectrum's policy."""
        if self.n != other.n:
            return False
        return all(self.policy.eq(a, b) for a, b in zip(self.by_label(), other.by_label()))


@dataclass(frozen=True)
class DensitySpectrum:
    """Occupations of a 1-particle density operator that is diagonal in the working basis."""

    n: int
    occupations: Tuple[Scalar, ...]
    policy: NumericPolicy = DEFAULT_POLICY

    @classmethod
    def from_values(cls, raw: Sequence, policy: NumericPolicy = DEFAULT_POLICY) -> "DensitySpectrum":
        occ = tuple(policy.coerce(v) for v in raw)
        if not occ:
            raise InvalidArgument("density needs at least one occupation")
        if any(policy.is_negative(d) for d in occ):
            raise InvalidArgument("occupations must be nonnegative")
        if not policy.eq(sum(occ), 1):
            raise InvalidArgument(f"occupations sum to {sum(occ)}, expected 1")
        return cls(len(occ), occ, policy)


@dataclass(frozen=True)
class Membership:
    """Verdict of the dual-cone test; truthy when the spectrum is a member."""

    member: bool
    min_pairing: Scalar
    certificate: Optional[Tuple[int, ...]] = None

    def __bool__(self):
        return self.member


def _check_particles(spec: OneBodySpectrum, N: int) -> None:
    if not isinstance(N, int) or N < 1:
        raise InvalidArgument(f"particle number must be a positive integer, got {N!r}")
    if N > spec.n:
        raise InvalidArgument(f"N = {N} particles do not fit in n = {spec.n} orbitals")


def min_pairing(spec: OneBodySpectrum, N: int) -> Scalar:
    """Minimum of ``N * sum(x_i d_i)`` over diagonal N-representable densities.

    The feasible set is ``0 <= d_i <= 1/N, sum(d) = 1``; its optimal vertex puts
    weight 1/N on the N smallest eigenvalues.
    """
    _check_particles(spec, N)
    return sum(spec.values[:N], spec.policy.zero())


def is_dual_cone_member(spec: OneBodySpectrum, N: int) -> Membership:
    """True iff the N smallest eigenvalues have a nonnegative sum.

    When the test fails the certificate lists the labels of those N orbitals.
    """
    total = min_pairing(spec, N)
    if spec.policy.is_negative(total):
        return Membership(False, total, tuple(spec.labels[:N]))
    return Membership(True, total)


def is_n_representable(d: DensitySpectrum, N: int) -> bool:
    if not isinstance(N, int) or N < 1:
        raise InvalidArgument(f"particle number must be a positive integer, got {N!r}")
    bound = d.policy.coerce(1) / N
    return all(d.policy.cmp(x, bound) <= 0 for x in d.occupations)
