"""Spectral, semi-spectral and pseudo-spectral decompositions, and state measures.

All three decompositions realize the same diagonal N-particle operator:

* spectral: eigenvalues times determinant-level projectors;
* semi-spectral: 1-particle eigenvalues times number operators ``n_i``;
* pseudo-spectral: canonical weights times hole projectors ``1 - n_i``
  (i <= r) and number operators ``n_k`` (k > r).

Each can be viewed as a POV measure, raw or normalized to sum to identity.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Tuple, Union

import numpy as np

from .dual_cone import CanonicalDecomposition
from .errors import InvalidArgument
from .fock import (
    DEFAULT_BUDGET,
    DiagonalOperator,
    OccupationState,
    basis_masks,
    basis_size,
    full_spectrum,
    identity_operator,
    number_operator,
    state_index,
)
from .linalg import rank_complex_exact, rank_float
from .numeric import DEFAULT_POLICY, NumericPolicy, Scalar, to_json_scalar
from .spectral import OneBodySpectrum


@dataclass(frozen=True)
class PovAtom:
    outcome: Scalar
    effect: DiagonalOperator
    tag: Tuple  # ("particle", label) | ("hole", label) | ("eigenprojector", level index)

    @property
    def effect_rank(self) -> int:
        return self.effect.rank()

    def to_dict(self) -> dict:
        return {
            "outcome": to_json_scalar(self.outcome),
            "tag": f"{self.tag[0]}({self.tag[1]})",
            "effect_rank": self.effect_rank,
        }


@dataclass(frozen=True)
class PovMeasure:
    """Atoms whose effects sum to ``scale`` times the identity."""

    n: int
    N: int
    atoms: Tuple[PovAtom, ...]
    scale: Scalar
    policy: NumericPolicy = DEFAULT_POLICY

    @property
    def normalized(self) -> bool:
        return self.policy.eq(self.scale, 1)

    def total_effect(self) -> DiagonalOperator:
        total = DiagonalOperator.constant(self.n, self.N, 0, self.policy)
        for a in self.atoms:
            total = total + a.effect
        return total

    def check_normalization(self) -> bool:
        return self.total_effect() == identity_operator(self.n, self.N, self.policy) * self.scale


@dataclass(frozen=True)
class PseudoSpectralDecomposition:
    """Hole terms ``(gamma, label, 1 - n_label)`` and particle terms ``(gamma, label, n_label)``."""

    n: int
    N: int
    hole_terms: Tuple[Tuple[Scalar, int, DiagonalOperator], ...]
    particle_terms: Tuple[Tuple[Scalar, int, DiagonalOperator], ...]
    policy: NumericPolicy = DEFAULT_POLICY

    @property
    def atoms(self) -> Tuple[PovAtom, ...]:
        return tuple(PovAtom(g, e, ("hole", lab)) for g, lab, e in self.hole_terms) + tuple(
            PovAtom(g, e, ("particle", lab)) for g, lab, e in self.particle_terms
        )

    def family(self) -> PovMeasure:
        """The complete raw family {n_j, 1 - n_j}, unused members carrying outcome 0.

        Its effects sum to ``n`` times the identity.
        """
        return _pseudo_family(self, normalized=False)


class StateClass(str, enum.Enum):
    PARTICLE = "particle"
    HOLE = "hole"
    NEITHER = "neither"


def _number_ops(n: int, N: int, policy: NumericPolicy, budget: int) -> List[DiagonalOperator]:
    basis_size(n, N, budget)
    return [number_operator(i, n, N, policy) for i in range(1, n + 1)]


def spectral(spec: OneBodySpectrum, N: int, budget: int = DEFAULT_BUDGET) -> PovMeasure:
    """Projector-valued measure: one atom per many-body level."""
    levels = full_spectrum(spec, N, budget).levels
    pol = spec.policy
    masks = basis_masks(spec.n, N, budget)
    atoms = []
    for k, lvl in enumerate(levels):
        ind = np.isin(masks, lvl.states)
        effect = DiagonalOperator(spec.n, N, [pol.coerce(int(x)) for x in ind], pol)
        atoms.append(PovAtom(lvl.eigenvalue, effect, ("eigenprojector", k)))
    return PovMeasure(spec.n, N, tuple(atoms), pol.one(), pol)


def semi_spectral(
    spec: OneBodySpectrum, N: int, normalized: bool = False, budget: int = DEFAULT_BUDGET
) -> PovMeasure:
    """Raw: atoms ``(x_i, n_i)`` summing to N * identity. Normalized: ``(N x_i, n_i / N)``."""
    pol = spec.policy
    ops = _number_ops(spec.n, N, pol, budget)
    vals = spec.by_label()
    if normalized:
        atoms = tuple(PovAtom(N * v, op / N, ("particle", i + 1)) for i, (v, op) in enumerate(zip(vals, ops)))
        return PovMeasure(spec.n, N, atoms, pol.one(), pol)
    atoms = tuple(PovAtom(v, op, ("particle", i + 1)) for i, (v, op) in enumerate(zip(vals, ops)))
    return PovMeasure(spec.n, N, atoms, pol.coerce(N), pol)


def _pseudo_family(p: PseudoSpectralDecomposition, normalized: bool) -> PovMeasure:
    pol = p.policy
    ops = _number_ops(p.n, p.N, pol, DEFAULT_BUDGET)
    one = identity_operator(p.n, p.N, pol)
    hole_w = {lab: g for g, lab, _ in p.hole_terms}
    part_w = {lab: g for g, lab, _ in p.particle_terms}
    atoms = []
    for lab in range(1, p.n + 1):
        n_op = ops[lab - 1]
        for kind, effect, weight in (("hole", one - n_op, hole_w.get(lab)), ("particle", n_op, part_w.get(lab))):
            outcome = pol.zero() if weight is None else weight
            if normalized:
                atoms.append(PovAtom(p.n * outcome, effect / p.n, (kind, lab)))
            else:
                atoms.append(PovAtom(outcome, effect, (kind, lab)))
    scale = pol.one() if normalized else pol.coerce(p.n)
    return PovMeasure(p.n, p.N, tuple(atoms), scale, pol)


def pseudo_spectral(
    d: CanonicalDecomposition, normalized: bool = False, budget: int = DEFAULT_BUDGET
) -> Union[PseudoSpectralDecomposition, PovMeasure]:
    """Pseudo-spectral decomposition of the expanded operator.

    With ``normalized=True`` returns the normalized POV measure: all 2n
    effects ``n_j / n`` and ``(1 - n_j) / n`` with outcomes ``n * gamma`` on
    the used ones and 0 on the rest.
    """
    pol = d.policy
    ops = _number_ops(d.n, d.N, pol, budget)
    one = identity_operator(d.n, d.N, pol)
    holes, parts = [], []
    for pos, (g, lab) in enumerate(zip(d.gammas, d.labels)):
        if pos < d.r:
            holes.append((g, lab, one - ops[lab - 1]))
        else:
            parts.append((g, lab, ops[lab - 1]))
    p = PseudoSpectralDecomposition(d.n, d.N, tuple(holes), tuple(parts), pol)
    return _pseudo_family(p, normalized=True) if normalized else p


def realize(x: Union[PovMeasure, PseudoSpectralDecomposition]) -> DiagonalOperator:
    """Sum of outcome times effect over all atoms."""
    total = DiagonalOperator.constant(x.n, x.N, 0, x.policy).entries
    for a in x.atoms:
        if (a.effect.n, a.effect.N) != (x.n, x.N):
            raise InvalidArgument("atom effect does not match the measure's (n, N)")
        total = total + a.effect.entries * a.outcome
    return DiagonalOperator(x.n, x.N, total, x.policy)


@dataclass(frozen=True)
class ManyBodyState:
    """``psi = sqrt(weight_scale) * sum_I c_I |I>`` with Gaussian-rational or float amplitudes.

    ``weight_scale`` lets an exactly normalized state carry irrational
    normalization (e.g. ``(|123> + |145>) / sqrt(2)``): probabilities are
    ``|c_I|^2 * weight_scale`` and stay rational.
    """

    n: int
    N: int
    amplitudes: Tuple[Tuple[int, Scalar, Scalar], ...]  # (mask, re, im), basis order, nonzero only
    policy: NumericPolicy = DEFAULT_POLICY
    weight_scale: Scalar = field(default=None)

    def __post_init__(self):
        if self.weight_scale is None:
            object.__setattr__(self, "weight_scale", self.policy.one())

    @classmethod
    def from_terms(
        cls, n: int, N: int, terms: Iterable, policy: NumericPolicy = DEFAULT_POLICY,
        normalize: bool = False,
    ) -> "ManyBodyState":
        """Build from ``(occupied_orbitals, re, im)`` triples; repeated determinants add up.

        ``normalize=True`` rescales by ``1 / sqrt(sum |c|^2)`` (kept symbolic
        through ``weight_scale``).
        """
        acc: Dict[int, List[Scalar]] = {}
        for orbitals, re, im in terms:
            occ = OccupationState.from_orbitals(orbitals, n)
            if occ.N != N:
                raise InvalidArgument(f"determinant {list(orbitals)} has {occ.N} particles, expected {N}")
            slot = acc.setdefault(occ.bits, [policy.zero(), policy.zero()])
            slot[0] += policy.coerce(re)
            slot[1] += policy.coerce(im)
        amps = []
        for bits in sorted(acc, key=lambda b: state_index(OccupationState(b, n, N))):
            re, im = acc[bits]
            if not (policy.is_zero(re) and policy.is_zero(im)):
                amps.append((bits, re, im))
        state = cls(n, N, tuple(amps), policy)
        if normalize:
            norm2 = state.norm_squared()
            if policy.is_zero(norm2):
                raise InvalidArgument("cannot normalize the zero vector")
            state = cls(n, N, tuple(amps), policy, policy.one() / norm2)
        return state

    @classmethod
    def determinant(cls, orbitals, n: int, policy: NumericPolicy = DEFAULT_POLICY) -> "ManyBodyState":
        orbitals = list(orbitals)
        return cls.from_terms(n, len(orbitals), [(orbitals, 1, 0)], policy)

    def norm_squared(self) -> Scalar:
        return sum((re * re + im * im for _, re, im in self.amplitudes), self.policy.zero()) * self.weight_scale

    def check_normalized(self) -> None:
        norm2 = self.norm_squared()
        if not self.policy.eq(norm2, 1):
            raise InvalidArgument(f"state is not normalized: sum |c|^2 = {norm2}")

    def probabilities(self) -> Dict[int, Scalar]:
        return {b: (re * re + im * im) * self.weight_scale for b, re, im in self.amplitudes}

    def support(self) -> List[int]:
        return [b for b, p in self.probabilities().items() if not self.policy.is_zero(p)]


def occupation_measures(psi: ManyBodyState) -> Tuple[Tuple[Scalar, ...], Tuple[Scalar, ...]]:
    """Per orbital: probability of being occupied, and of being empty."""
    psi.check_normalized()
    pol = psi.policy
    mu = [pol.zero()] * psi.n
    for bits, p in psi.probabilities().items():
        for i in range(psi.n):
            if bits >> i & 1:
                mu[i] += p
    return tuple(mu), tuple(pol.one() - m for m in mu)


def expectation(op: DiagonalOperator, psi: ManyBodyState) -> Scalar:
    if (op.n, op.N) != (psi.n, psi.N):
        raise InvalidArgument(f"operator (n={op.n}, N={op.N}) vs state (n={psi.n}, N={psi.N})")
    psi.check_normalized()
    total = psi.policy.zero()
    for bits, p in psi.probabilities().items():
        total += p * op[OccupationState(bits, psi.n, psi.N)]
    return total


def pseudo_expectation(d: CanonicalDecomposition, psi: ManyBodyState) -> Scalar:
    """``sum_{i<=r} gamma_i * empty_i + sum_{k>r} gamma_k * occupied_k``."""
    if d.n != psi.n:
        raise InvalidArgument(f"decomposition has {d.n} orbitals, state has {psi.n}")
    mu, mu_t = occupation_measures(psi)
    total = psi.policy.zero()
    for pos, (g, lab) in enumerate(zip(d.gammas, d.labels)):
        total += g * (mu_t[lab - 1] if pos < d.r else mu[lab - 1])
    return total


def classify_state(psi: ManyBodyState, label: int) -> StateClass:
    if not 1 <= label <= psi.n:
        raise InvalidArgument(f"orbital {label} outside 1..{psi.n}")
    bit = 1 << (label - 1)
    support = psi.support()
    if support and all(b & bit for b in support):
        return StateClass.PARTICLE
    if all(not b & bit for b in support):
        return StateClass.HOLE
    return StateClass.NEITHER


@dataclass(frozen=True)
class FactorSpace:
    """Dimension of ``{phi : phi ^ psi = 0}`` and the basis orbitals lying in it."""

    dimension: int
    factors: Tuple[int, ...]

    @property
    def completely_correlated(self) -> bool:
        return self.dimension == 0


def _wedge_sign(bits: int, j: int) -> int:
    # moving phi_j past the occupied orbitals below it
    return -1 if bin(bits & ((1 << j) - 1)).count("1") % 2 else 1


def grassmann_factor_space(psi: ManyBodyState, budget: int = DEFAULT_BUDGET) -> FactorSpace:
    """Kernel of ``phi -> phi ^ psi`` from the 1-particle space into N+1 particles."""
    n, N, pol = psi.n, psi.N, psi.policy
    support = psi.support()
    if not support:
        raise InvalidArgument("the zero vector has no factor space")
    factors = tuple(i + 1 for i in range(n) if all(b >> i & 1 for b in support))
    if N == n:
        return FactorSpace(n, factors)
    basis_size(n, N + 1, budget)
    rows: Dict[int, int] = {}
    re_rows: List[List[Scalar]] = []
    im_rows: List[List[Scalar]] = []
    for bits, re, im in psi.amplitudes:
        for j in range(n):
            if bits >> j & 1:
                continue
            target = bits | (1 << j)
            if target not in rows:
                rows[target] = len(re_rows)
                re_rows.append([pol.zero()] * n)
                im_rows.append([pol.zero()] * n)
            k = rows[target]
            sign = _wedge_sign(bits, j)
            re_rows[k][j] += sign * re
            im_rows[k][j] += sign * im
    if pol.exact:
        rank = rank_complex_exact(re_rows, im_rows, n)
    else:
        mat = np.asarray(re_rows, dtype=float) + 1j * np.asarray(im_rows, dtype=float)
        rank = rank_float(mat, pol.tol)
    return FactorSpace(n - rank, factors)
