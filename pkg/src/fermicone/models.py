"""Model 1-body Hamiltonians with collective and normal excitations.

A model is specified through its pseudo-spectral weights: r hole orbitals,
m - r "normal" particle orbitals, and a reservoir of kappa = n - m orbitals
with zero weight. Zero is then the ground level; single holes give
collective levels and single particles give normal levels.

Type I puts one collective value inside the gap, type II two.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .decompositions import ManyBodyState, grassmann_factor_space
from .dual_cone import CanonicalDecomposition, canonical_decompose
from .errors import GapConditionError, ModelHypothesisError
from .fock import DEFAULT_BUDGET, full_spectrum
from .numeric import DEFAULT_POLICY, NumericPolicy, Scalar, format_scalar, to_json_scalar
from .spectral import OneBodySpectrum

GROUND, COLLECTIVE, NORMAL, OTHER = "ground", "collective", "normal", "other"


@dataclass(frozen=True)
class Model74Params:
    """Parameters of the three-block model.

    Orbitals 1..s carry ``betas`` (negative), s+1..r ``alphas_mid``,
    r+1..m ``alphas_normal``, and m+1..n the reservoir value ``-t``.
    """

    n: int
    N: int
    r: int
    m: int
    betas: Tuple = ()
    alphas_mid: Tuple = ()
    alphas_normal: Tuple = ()
    policy: NumericPolicy = DEFAULT_POLICY

    def __post_init__(self):
        pol = self.policy
        for name in ("betas", "alphas_mid", "alphas_normal"):
            object.__setattr__(self, name, tuple(pol.coerce(v) for v in getattr(self, name)))

    @property
    def s(self) -> int:
        return len(self.betas)

    @property
    def kappa(self) -> int:
        return self.n - self.m

    @property
    def t(self) -> Scalar:
        return (sum(self.betas, self.policy.zero()) + sum(self.alphas_mid, self.policy.zero())) / (self.N - self.r)

    def validate(self, require_normal: bool = True) -> None:
        pol, n, N, r, m, s = self.policy, self.n, self.N, self.r, self.m, self.s
        if N < 1:
            raise ModelHypothesisError(f"N = {N} must be positive")
        if s + len(self.alphas_mid) != r:
            raise ModelHypothesisError(f"len(betas) + len(alphas_mid) = {s + len(self.alphas_mid)} != r = {r}")
        if m - r != len(self.alphas_normal):
            raise ModelHypothesisError(f"m - r = {m - r} != len(alphas_normal) = {len(self.alphas_normal)}")
        if not s <= r <= N - 1:
            raise ModelHypothesisError(f"s <= r <= N - 1 fails: s={s}, r={r}, N={N}")
        if require_normal and not r < m:
            raise ModelHypothesisError(f"r < m fails: r={r}, m={m}")
        if not m < n:
            raise ModelHypothesisError(f"m < n fails: m={m}, n={n}")
        if not n - m >= N - r + 1:
            raise ModelHypothesisError(f"n - m >= N - r + 1 fails: {n - m} < {N - r + 1}")
        bad = [b for b in self.betas if not pol.is_negative(b)]
        if bad:
            raise ModelHypothesisError(f"betas must be negative, got {[format_scalar(b) for b in bad]}")
        bad = [a for a in self.alphas_mid if pol.is_negative(a)]
        if bad:
            raise ModelHypothesisError(f"alphas_mid must be nonnegative, got {[format_scalar(a) for a in bad]}")
        t = self.t
        for a in self.alphas_mid:
            if not pol.is_negative(t + a):
                raise ModelHypothesisError(
                    f"t + alpha_mid < 0 fails: t = {format_scalar(t)}, alpha = {format_scalar(a)}"
                )
        for a in self.alphas_normal:
            if not pol.is_positive(t + a):
                raise ModelHypothesisError(
                    f"t + alpha_normal > 0 fails: t = {format_scalar(t)}, alpha = {format_scalar(a)}"
                )

    def one_body_values(self) -> List[Scalar]:
        return list(self.betas) + list(self.alphas_mid) + list(self.alphas_normal) + [-self.t] * self.kappa

    def expected_gammas(self) -> List[Scalar]:
        """Weights per orbital label: holes ``-(t + x)``, normal ``t + x``, reservoir 0."""
        t = self.t
        return (
            [-(t + b) for b in self.betas]
            + [-(t + a) for a in self.alphas_mid]
            + [t + a for a in self.alphas_normal]
            + [self.policy.zero()] * self.kappa
        )


def _build(p: Model74Params, require_normal: bool) -> Tuple[OneBodySpectrum, CanonicalDecomposition]:
    p.validate(require_normal)
    spec = OneBodySpectrum.from_values(p.one_body_values(), p.policy)
    d = canonical_decompose(spec, p.N)
    got = d.gamma_by_label()
    want = p.expected_gammas()
    if d.r != p.r or not all(p.policy.eq(a, b) for a, b in zip(got, want)):
        raise ModelHypothesisError(
            f"canonical decomposition (r={d.r}) does not reproduce the model weights (r={p.r})"
        )
    return spec, d


def build_thm74(p: Model74Params) -> Tuple[OneBodySpectrum, CanonicalDecomposition]:
    """Spectrum of the model and its canonical decomposition, checked against the model weights."""
    return _build(p, require_normal=True)


def kernel_dimension_74(p: Model74Params) -> int:
    """Ground degeneracy: hole orbitals filled, normal orbitals empty, N - r from the reservoir."""
    return math.comb(p.n - p.m, p.N - p.r)


@dataclass(frozen=True)
class DiagramLevel:
    eigenvalue: Scalar
    degeneracy: int
    classification: str
    states: Tuple[int, ...]
    particle_states: int
    hole_states: int
    factor_dimension: Optional[int] = None
    factors: Optional[Tuple[int, ...]] = None

    @property
    def completely_correlated(self) -> Optional[bool]:
        return None if self.factor_dimension is None else self.factor_dimension == 0


@dataclass(frozen=True)
class LevelDiagram:
    n: int
    N: int
    spectrum: OneBodySpectrum
    decomposition: CanonicalDecomposition
    levels: Tuple[DiagramLevel, ...]
    seed: int
    checks: Dict[str, dict] = field(default_factory=dict)
    notes: Tuple[str, ...] = ()

    def level_at(self, value) -> Optional[DiagramLevel]:
        pol = self.spectrum.policy
        value = pol.coerce(value)
        return next((lv for lv in self.levels if pol.eq(lv.eigenvalue, value)), None)

    def of_class(self, classification: str) -> List[DiagramLevel]:
        return [lv for lv in self.levels if lv.classification == classification]

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.checks.values())

    def to_dict(self, max_states: int = 8) -> dict:
        levels = []
        for lv in self.levels:
            rep = _occupied(lv.states[0], self.n)
            levels.append({
                "eigenvalue": to_json_scalar(lv.eigenvalue),
                "degeneracy": lv.degeneracy,
                "classification": lv.classification,
                "particle_states": lv.particle_states,
                "hole_states": lv.hole_states,
                "representative": rep,
                "contributions": [to_json_scalar(self.spectrum.by_label()[i - 1]) for i in rep],
                "states": [_occupied(b, self.n) for b in lv.states[:max_states]],
                "factor_dimension": lv.factor_dimension,
                "factors": None if lv.factors is None else list(lv.factors),
                "completely_correlated": lv.completely_correlated,
            })
        return {
            "n": self.n,
            "N": self.N,
            "one_body": [to_json_scalar(v) for v in self.spectrum.by_label()],
            "decomposition": self.decomposition.to_dict(),
            "seed": self.seed,
            "levels": levels,
            "checks": self.checks,
            "notes": list(self.notes),
        }

    def render(self, max_levels: int = 12, bar_width: int = 24) -> str:
        """Monospace level diagram, lowest level at the bottom.

        Each line shows the eigenvalue, a degeneracy bar, the class, and the
        1-particle values that add up to it for one representative state.
        """
        d = self.decomposition
        vals = self.spectrum.by_label()
        hole_set, part_set = set(d.holes), set(d.particles)
        head = [
            f"level diagram  n={self.n}  N={self.N}  r={d.r}  t={format_scalar(d.t)}  seed={self.seed}",
            "one-particle values (label:value): "
            + "  ".join(f"{lab}:{format_scalar(vals[lab - 1])}" for lab in range(1, self.n + 1)),
            "holes " + str(sorted(hole_set)) + "   particles " + str(sorted(part_set)),
        ]
        shown = self.levels[:max_levels]
        top = max((lv.degeneracy for lv in shown), default=1)
        width = max((len(format_scalar(lv.eigenvalue)) for lv in shown), default=1)
        lines = []
        for lv in reversed(shown):
            bar = "#" * max(1, round(bar_width * lv.degeneracy / top))
            rep = _occupied(lv.states[0], self.n)
            arrows = " ".join(_signed(vals[i - 1]) for i in rep)
            extra = ""
            if lv.factor_dimension is not None:
                extra = f"  [factor dim {lv.factor_dimension}]"
            lines.append(
                f"{format_scalar(lv.eigenvalue):>{width}} ┤ {bar:<{bar_width}} x{lv.degeneracy:<4} "
                f"{lv.classification:<10} |{' '.join(map(str, rep))}> <- {arrows}{extra}"
            )
        if len(self.levels) > max_levels:
            lines.insert(0, f"{'':>{width}} ┆ ... {len(self.levels) - max_levels} higher levels")
        body = head + [""] + lines
        if self.checks:
            body.append("")
            body += [f"check {name}: {'pass' if c['pass'] else 'FAIL'}" for name, c in self.checks.items()]
        body += [f"note: {note}" for note in self.notes]
        return "\n".join(body)


def _occupied(bits: int, n: int) -> List[int]:
    return [i + 1 for i in range(n) if bits >> i & 1]


def _signed(x) -> str:
    s = format_scalar(x)
    return s if s.startswith("-") else "+" + s


def _generic_state(states: Sequence[int], n: int, N: int, rng: random.Random, pol: NumericPolicy) -> ManyBodyState:
    amps = tuple((int(b), pol.coerce(rng.randint(1, 997)), pol.zero()) for b in states)
    return ManyBodyState(n, N, amps, pol)


def analyze_levels(
    spec: OneBodySpectrum, N: int, d: CanonicalDecomposition, seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> LevelDiagram:
    """Group the many-body spectrum and classify every level.

    A state is particle-type when it occupies an orbital with positive
    particle weight, hole-type when it instead leaves some hole orbital
    empty. A level is ``ground`` at eigenvalue zero, ``collective`` when all
    its states are hole-type, ``normal`` when it holds any particle-type
    state, ``other`` otherwise. Ground and collective levels also get the
    factor-space dimension of a seeded generic combination of their states.
    """
    pol = spec.policy
    fs = full_spectrum(spec, N, budget)
    hole_mask = sum(1 << (lab - 1) for lab in d.holes)
    part_mask = sum(
        1 << (lab - 1) for g, lab in zip(d.gammas[d.r:], d.particles) if pol.is_positive(g)
    )
    rng = random.Random(seed)
    levels = []
    for lv in fs.levels:
        states = tuple(int(b) for b in lv.states)
        particle = sum(1 for b in states if b & part_mask)
        hole = sum(1 for b in states if not b & part_mask and (b & hole_mask) != hole_mask)
        if pol.is_zero(lv.eigenvalue):
            cls = GROUND
        elif hole == len(states):
            cls = COLLECTIVE
        elif particle:
            cls = NORMAL
        else:
            cls = OTHER
        fdim = factors = None
        if cls in (GROUND, COLLECTIVE):
            fspace = grassmann_factor_space(_generic_state(states, spec.n, N, rng, pol), budget)
            fdim, factors = fspace.dimension, fspace.factors
        levels.append(DiagramLevel(lv.eigenvalue, lv.degeneracy, cls, states, particle, hole, fdim, factors))
    diagram = LevelDiagram(spec.n, N, spec, d, tuple(levels), seed)
    diagram.checks.update(_weight_checks(diagram))
    return diagram


def _weight_checks(diagram: LevelDiagram) -> Dict[str, dict]:
    d, pol = diagram.decomposition, diagram.spectrum.policy
    gam = d.gamma_by_label()
    holes = d.holes
    particles = [lab for lab in d.particles if pol.is_positive(gam[lab - 1])]
    bookkeeping = True
    for lv in diagram.levels:
        for b in lv.states:
            total = sum((gam[i - 1] for i in holes if not b >> (i - 1) & 1), pol.zero())
            total += sum((gam[k - 1] for k in particles if b >> (k - 1) & 1), pol.zero())
            if not pol.eq(total, lv.eigenvalue):
                bookkeeping = False
    positive = [gam[i - 1] for i in list(holes) + particles if pol.is_positive(gam[i - 1])]
    distinct = []
    for g in sorted(positive):
        if not distinct or not pol.eq(g, distinct[-1]):
            distinct.append(g)
    level_vals = [lv.eigenvalue for lv in diagram.levels]
    missing = [g for g in distinct if not any(pol.eq(g, v) for v in level_vals)]
    pos_levels = [v for v in level_vals if pol.is_positive(v)]
    lowest = pos_levels[: len(distinct)]
    lowest_ok = len(lowest) == len(distinct) and all(pol.eq(a, b) for a, b in zip(lowest, distinct))
    return {
        "weight_bookkeeping": {"pass": bookkeeping},
        "weights_are_levels": {"pass": not missing, "missing": [to_json_scalar(g) for g in missing]},
        "weights_are_lowest_positive_levels": {
            "pass": lowest_ok,
            "weights": [to_json_scalar(g) for g in distinct],
            "lowest_positive_levels": [to_json_scalar(v) for v in lowest],
        },
        "zero_is_lowest": {"pass": pol.is_zero(level_vals[0]) if level_vals else False},
    }


def _check(observed, expected, pol=None) -> dict:
    ok = observed == expected if pol is None else pol.eq(observed, expected)
    return {"pass": bool(ok), "observed": to_json_scalar(observed), "expected": to_json_scalar(expected)}


@dataclass(frozen=True)
class TypeIParams:
    """One collective value: r hole orbitals at ``beta``, normal values ``alphas``, kappa reservoir orbitals.

    r = N/2 for even N and (N+1)/2 for odd N; m = r + len(alphas).
    """

    N: int
    beta: Scalar
    alphas: Tuple
    n: int
    m: Optional[int] = None
    policy: NumericPolicy = DEFAULT_POLICY

    def __post_init__(self):
        pol = self.policy
        object.__setattr__(self, "beta", pol.coerce(self.beta))
        object.__setattr__(self, "alphas", tuple(pol.coerce(a) for a in self.alphas))
        m = self.r + len(self.alphas)
        if self.m is None:
            object.__setattr__(self, "m", m)
        elif self.m != m:
            raise ModelHypothesisError(f"m = {self.m} but r + len(alphas) = {m}")

    @property
    def r(self) -> int:
        return (self.N + 1) // 2

    @property
    def kappa(self) -> int:
        return self.n - self.m

    def to_model74(self) -> Model74Params:
        return Model74Params(self.n, self.N, self.r, self.m, (self.beta,) * self.r, (), self.alphas, self.policy)


def _type_i_gap(p: TypeIParams) -> None:
    pol, beta, N, r = p.policy, p.beta, p.N, p.r
    if N < 2:
        raise ModelHypothesisError(f"N = {N}: need at least 2 particles")
    if not pol.is_negative(beta):
        raise ModelHypothesisError(f"β < 0 fails: β = {format_scalar(beta)}")
    if not p.kappa >= N - r + 1:
        raise ModelHypothesisError(f"κ = n − m >= {N - r + 1} fails: κ = {p.kappa}")
    t = r * beta / (N - r)
    for j, a in enumerate(p.alphas, start=r + 1):
        if not pol.is_positive(a):
            raise ModelHypothesisError(f"α_{j} > 0 fails: α_{j} = {format_scalar(a)}")
        if N % 2 == 0:
            lhs, rhs = beta + a, -2 * beta
            text = f"β + α_j > −2β fails for j = {j}: {format_scalar(lhs)} <= {format_scalar(rhs)}"
        else:
            lhs, rhs = t + a, -(t + beta)
            text = f"t + α_j > −(t + β) fails for j = {j} (t = {format_scalar(t)}): {format_scalar(lhs)} <= {format_scalar(rhs)}"
        if not pol.cmp(lhs, rhs) > 0:
            raise GapConditionError(text)


def type_i_model(p: TypeIParams, seed: int = 0, budget: int = DEFAULT_BUDGET) -> Tuple[OneBodySpectrum, LevelDiagram]:
    _type_i_gap(p)
    spec, d = _build(p.to_model74(), require_normal=False)
    diagram = analyze_levels(spec, p.N, d, seed, budget)
    pol, N, r, kappa = p.policy, p.N, p.r, p.kappa
    t = d.t
    g_hole = -(t + p.beta)
    checks, notes = diagram.checks, []
    ground = diagram.level_at(0)
    checks["ground_degeneracy"] = _check(ground.degeneracy if ground else 0, math.comb(kappa, N - r))
    coll = diagram.level_at(g_hole)
    coll_deg = coll.degeneracy if coll else 0
    formula = r * math.comb(kappa, N - r + 1)
    variant = r * math.comb(kappa, N - r)
    checks["collective_degeneracy"] = _check(coll_deg, formula)
    checks["collective_is_collective"] = {"pass": bool(coll and coll.classification == COLLECTIVE)}
    notes.append(
        f"collective level {format_scalar(g_hole)}: degeneracy {coll_deg}; "
        f"r*C(κ, N−r+1) = {formula} ({'matches' if coll_deg == formula else 'does not match'}), "
        f"variant r*C(κ, N−r) = {variant} ({'matches' if coll_deg == variant else 'does not match'})"
    )
    if p.alphas:
        a_min = min(p.alphas)
        g_norm = t + a_min
        mult = sum(1 for a in p.alphas if pol.eq(a, a_min))
        norm = diagram.level_at(g_norm)
        checks["normal_degeneracy"] = _check(norm.degeneracy if norm else 0, mult * math.comb(kappa, N - r - 1))
        checks["gap_ordering"] = {
            "pass": pol.is_positive(g_hole) and pol.cmp(g_hole, g_norm) < 0,
            "order": [0, to_json_scalar(g_hole), to_json_scalar(g_norm)],
        }
    if coll is not None and coll.factor_dimension:
        notes.append(
            f"generic collective eigenfunction has factor dimension {coll.factor_dimension} "
            f"(κ = {kappa}); complete correlation needs a larger reservoir"
        )
    return spec, _with_notes(diagram, notes)


@dataclass(frozen=True)
class TypeIIParams:
    """Two collective values: N/4 orbitals at 2β, N/4 at 2α, normals ``alphas``, reservoir at −(β+α)."""

    N: int
    beta: Scalar
    alpha: Scalar
    alphas: Tuple
    n: int
    m: Optional[int] = None
    policy: NumericPolicy = DEFAULT_POLICY

    def __post_init__(self):
        pol = self.policy
        object.__setattr__(self, "beta", pol.coerce(self.beta))
        object.__setattr__(self, "alpha", pol.coerce(self.alpha))
        object.__setattr__(self, "alphas", tuple(pol.coerce(a) for a in self.alphas))
        m = self.N // 2 + len(self.alphas)
        if self.m is None:
            object.__setattr__(self, "m", m)
        elif self.m != m:
            raise ModelHypothesisError(f"m = {self.m} but N/2 + len(alphas) = {m}")

    @property
    def r(self) -> int:
        return self.N // 2

    @property
    def kappa(self) -> int:
        return self.n - self.m

    def to_model74(self) -> Model74Params:
        q = self.N // 4
        return Model74Params(
            self.n, self.N, self.r, self.m, (2 * self.beta,) * q, (2 * self.alpha,) * q, self.alphas, self.policy
        )


def _type_ii_gap(p: TypeIIParams) -> None:
    pol, b, a, N = p.policy, p.beta, p.alpha, p.N
    if N < 4 or N % 4:
        raise ModelHypothesisError(f"N = {N} must be a positive multiple of 4")
    if not pol.is_negative(b):
        raise ModelHypothesisError(f"β < 0 fails: β = {format_scalar(b)}")
    if not pol.is_positive(a):
        raise ModelHypothesisError(f"α > 0 fails: α = {format_scalar(a)}")
    for text, val in (("β + α < 0", b + a), ("β + 2α < 0", b + 2 * a), ("β + 3α < 0", b + 3 * a)):
        if not pol.is_negative(val):
            raise ModelHypothesisError(f"{text} fails: {format_scalar(val)}")
    if not p.kappa >= N - p.r + 1:
        raise ModelHypothesisError(f"κ = n − m >= {N - p.r + 1} fails: κ = {p.kappa}")
    for j, aj in enumerate(p.alphas, start=p.r + 1):
        val = 4 * b + 2 * a + aj
        if not pol.is_positive(val):
            raise GapConditionError(f"4β + 2α + α_j > 0 fails for j = {j}: {format_scalar(val)} <= 0")


def type_ii_model(p: TypeIIParams, seed: int = 0, budget: int = DEFAULT_BUDGET) -> Tuple[OneBodySpectrum, LevelDiagram]:
    _type_ii_gap(p)
    spec, d = _build(p.to_model74(), require_normal=False)
    diagram = analyze_levels(spec, p.N, d, seed, budget)
    pol, N, r, kappa, b, a = p.policy, p.N, p.r, p.kappa, p.beta, p.alpha
    gam = d.gamma_by_label()
    q = N // 4
    g1, g2 = gam[0], gam[q]
    checks, notes = diagram.checks, []
    checks["hole_weight_deep"] = _check(g1, -(3 * b + a), pol)
    checks["hole_weight_shallow"] = _check(g2, -(b + 3 * a), pol)
    variant = -(b + 2 * a)
    notes.append(
        f"shallow hole weight = {format_scalar(g2)} = −(β+3α); "
        f"variant −(β+2α) = {format_scalar(variant)} "
        f"{'matches' if pol.eq(g2, variant) else 'does not match'}"
    )
    ground = diagram.level_at(0)
    checks["ground_degeneracy"] = _check(ground.degeneracy if ground else 0, math.comb(kappa, N - r))
    low, high = sorted([g1, g2])
    colls = [diagram.level_at(low), diagram.level_at(high)]
    checks["collective_levels"] = {
        "pass": all(c is not None and c.classification == COLLECTIVE for c in colls),
        "values": [to_json_scalar(low), to_json_scalar(high)],
        "degeneracies": [c.degeneracy if c else 0 for c in colls],
    }
    if p.alphas:
        g_norm = b + a + min(p.alphas)
        checks["gap_ordering"] = {
            "pass": pol.is_positive(low) and pol.cmp(low, high) < 0 and pol.cmp(high, g_norm) < 0,
            "order": [0, to_json_scalar(low), to_json_scalar(high), to_json_scalar(g_norm)],
        }
        norm = diagram.level_at(g_norm)
        if norm is not None and norm.hole_states:
            notes.append(
                f"normal level {format_scalar(g_norm)} also holds {norm.hole_states} hole-type state(s) "
                f"(degeneracy {norm.degeneracy} = {norm.particle_states} particle-type + {norm.hole_states} hole-type)"
            )
    return spec, _with_notes(diagram, notes)


def _with_notes(diagram: LevelDiagram, notes: List[str]) -> LevelDiagram:
    return LevelDiagram(
        diagram.n, diagram.N, diagram.spectrum, diagram.decomposition, diagram.levels,
        diagram.seed, diagram.checks, diagram.notes + tuple(notes),
    )
