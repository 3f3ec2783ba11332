"""Seeded random instances and the cross-validation suites behind ``fermicone check``.

Every suite compares library results against an independent computation
(direct enumeration over ``itertools.combinations``, closed-form counts) and
collects human-readable failure lines. Reports carry no timings so a seeded
run is reproducible byte for byte.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from .decompositions import (
    ManyBodyState,
    occupation_measures,
    pseudo_expectation,
    pseudo_spectral,
    realize,
    semi_spectral,
    spectral,
)
from .dual_cone import canonical_decompose, reconstruct
from .fock import build_one_body_diagonal, full_spectrum, identity_operator, verify_partition
from .models import Model74Params, analyze_levels, build_thm74, kernel_dimension_74
from .numeric import DEFAULT_POLICY, NumericPolicy, format_scalar
from .spectral import OneBodySpectrum, is_dual_cone_member


def random_fraction(rng: random.Random, lo: int = -12, hi: int = 12, max_den: int = 6) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, max_den))


def random_spectrum(rng: random.Random, n: int, policy: NumericPolicy = DEFAULT_POLICY) -> OneBodySpectrum:
    vals = [random_fraction(rng) for _ in range(n)]
    # repeated values exercise the degenerate paths
    if n > 1 and rng.random() < 0.3:
        vals[rng.randrange(n)] = vals[rng.randrange(n)]
    return OneBodySpectrum.from_values([policy.coerce(v) for v in vals], policy)


def random_member(rng: random.Random, n: int, N: int, policy: NumericPolicy = DEFAULT_POLICY) -> OneBodySpectrum:
    """A dual-cone member, from one of two constructions picked at random.

    Either a nonnegative combination of extreme elements, or a random
    spectrum shifted up until its N lowest values sum to zero or more
    (often exactly zero, which puts it on the boundary).
    """
    if rng.random() < 0.5:
        vals = [Fraction(0)] * n
        for lab in range(n):
            w = Fraction(rng.randint(0, 6), rng.randint(1, 4))
            if rng.random() < 0.5 and N > 0:
                vals = [v + w / N for v in vals]
                vals[lab] -= w
            else:
                vals[lab] += w
    else:
        vals = [random_fraction(rng) for _ in range(n)]
        low = sum(sorted(vals)[:N])
        if low < 0 and N > 0:
            shift = -low / N + (0 if rng.random() < 0.5 else Fraction(rng.randint(0, 4), rng.randint(1, 3)))
            vals = [v + shift for v in vals]
    return OneBodySpectrum.from_values([policy.coerce(v) for v in vals], policy)


def random_model74(rng: random.Random, max_n: int = 12, policy: NumericPolicy = DEFAULT_POLICY) -> Model74Params:
    """Rejection-sample valid three-block parameters with n <= max_n."""
    if max_n < 4:
        raise ValueError("three-block models need at least 4 orbitals")
    while True:
        N = rng.randint(2, max(2, max_n // 2))
        r = rng.randint(1, N - 1)
        kappa = rng.randint(N - r + 1, N - r + 3)
        m = rng.randint(r + 1, r + 3)
        n = m + kappa
        if n > max_n:
            continue
        s = rng.randint(1, r)
        betas = tuple(-Fraction(rng.randint(1, 12), rng.randint(1, 4)) for _ in range(s))
        mids = tuple(Fraction(rng.randint(0, 6), rng.randint(1, 4)) for _ in range(r - s))
        t = (sum(betas) + sum(mids)) / (N - r)
        normals = tuple(-t + Fraction(rng.randint(1, 12), rng.randint(1, 4)) for _ in range(m - r))
        p = Model74Params(n, N, r, m, betas, mids, normals, policy)
        try:
            p.validate()
        except ValueError:
            continue
        return p


def random_state(rng: random.Random, n: int, N: int, policy: NumericPolicy = DEFAULT_POLICY) -> ManyBodyState:
    """Normalized state on a few random determinants with Gaussian-rational amplitudes."""
    combos = math.comb(n, N)
    k = rng.randint(1, min(6, combos))
    terms = []
    for _ in range(k):
        occ = sorted(rng.sample(range(1, n + 1), N))
        terms.append((occ, rng.randint(-5, 5), rng.randint(-5, 5)))
    if all(re == 0 and im == 0 for _, re, im in terms):
        terms[0] = (terms[0][0], 1, 0)
    try:
        return ManyBodyState.from_terms(n, N, terms, policy, normalize=True)
    except ValueError:
        # the duplicates cancelled out
        return ManyBodyState.from_terms(n, N, [(terms[0][0], 1, 0)], policy)


def brute_force_min(spec: OneBodySpectrum, N: int):
    """Smallest determinant eigenvalue by direct enumeration, no sorting shortcut."""
    vals = spec.by_label()
    return min(sum(c, spec.policy.zero()) for c in itertools.combinations(vals, N))


@dataclass
class SuiteResult:
    name: str
    trials: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str):
        # keep reports readable on a bad run
        if len(self.failures) < 20:
            self.failures.append(msg)

    def to_dict(self) -> dict:
        return {"suite": self.name, "trials": self.trials, "pass": self.ok, "failures": self.failures}


def _sizes(rng, max_n, max_N, min_n=1):
    n = rng.randint(min_n, max_n)
    return n, rng.randint(1, min(n, max_N))


def suite_membership(rng, trials=200, max_n=10, max_N=6) -> SuiteResult:
    res = SuiteResult("membership")
    for _ in range(trials):
        n, N = _sizes(rng, max_n, max_N)
        spec = random_spectrum(rng, n) if rng.random() < 0.5 else random_member(rng, n, N)
        verdict = is_dual_cone_member(spec, N)
        oracle = brute_force_min(spec, N) >= 0
        res.trials += 1
        if bool(verdict) != oracle:
            res.fail(f"n={n} N={N} {[format_scalar(v) for v in spec.by_label()]}: member={bool(verdict)}, brute force={oracle}")
        elif full_spectrum(spec, N).is_psd() != oracle:
            res.fail(f"n={n} N={N}: full_spectrum lowest level disagrees with enumeration")
    return res


def suite_roundtrip(rng, trials=200, max_n=10, max_N=6) -> SuiteResult:
    res = SuiteResult("roundtrip")
    for _ in range(trials):
        n, N = _sizes(rng, max_n, max_N)
        spec = random_member(rng, n, N)
        d = canonical_decompose(spec, N)
        res.trials += 1
        tag = f"n={n} N={N} {[format_scalar(v) for v in spec.by_label()]}"
        if not reconstruct(d).equals(spec):
            res.fail(f"{tag}: reconstruction differs")
        if not all(g > 0 for g in d.gammas[: d.r]) or not all(g >= 0 for g in d.gammas[d.r:]):
            res.fail(f"{tag}: weight signs violated, r={d.r}, gammas={[format_scalar(g) for g in d.gammas]}")
    return res


def suite_threeway(rng, trials=100, max_n=10, max_N=5) -> SuiteResult:
    res = SuiteResult("threeway")
    for _ in range(trials):
        n, N = _sizes(rng, max_n, max_N)
        spec = random_member(rng, n, N)
        d = canonical_decompose(spec, N)
        # sum of occupied 1-particle values per determinant
        target = build_one_body_diagonal(spec, N)
        ops = {
            "spectral": realize(spectral(spec, N)),
            "semi_spectral": realize(semi_spectral(spec, N)),
            "pseudo_spectral": realize(pseudo_spectral(d)),
        }
        res.trials += 1
        for name, op in ops.items():
            if not op == target:
                res.fail(f"n={n} N={N}: {name} realization differs from the expanded operator")
    return res


def suite_pov(rng, trials=50, max_n=8, max_N=5) -> SuiteResult:
    res = SuiteResult("pov")
    for _ in range(trials):
        n, N = _sizes(rng, max_n, max_N)
        spec = random_member(rng, n, N)
        d = canonical_decompose(spec, N)
        one = identity_operator(n, N)
        fams = {
            "semi_spectral normalized": (semi_spectral(spec, N, normalized=True), 1),
            "semi_spectral raw": (semi_spectral(spec, N), N),
            "pseudo_spectral normalized": (pseudo_spectral(d, normalized=True), 1),
            "pseudo_spectral raw": (pseudo_spectral(d).family(), n),
        }
        res.trials += 1
        for name, (fam, scale) in fams.items():
            if not fam.total_effect() == one * scale:
                res.fail(f"n={n} N={N}: {name} effects do not sum to {scale} x identity")
    return res


def suite_kernel_formula(rng, trials=100, max_n=12) -> SuiteResult:
    """Ground degeneracy formula, zero as lowest level, and weights appearing as levels."""
    res = SuiteResult("kernel_formula")
    for _ in range(trials):
        p = random_model74(rng, max_n)
        spec, d = build_thm74(p)
        fs = full_spectrum(spec, p.N)
        res.trials += 1
        tag = f"n={p.n} N={p.N} r={p.r} m={p.m}"
        k = fs.kernel
        want = kernel_dimension_74(p)
        if k is None or k.degeneracy != want:
            res.fail(f"{tag}: ground degeneracy {0 if k is None else k.degeneracy} != C(n-m, N-r) = {want}")
        if fs.lowest != 0:
            res.fail(f"{tag}: lowest level {format_scalar(fs.lowest)} != 0")
        checks = analyze_levels(spec, p.N, d).checks
        for name in ("weight_bookkeeping", "weights_are_levels"):
            if not checks[name]["pass"]:
                res.fail(f"{tag}: {name} failed")
    return res


def suite_partition(rng, trials=200, max_n=16) -> SuiteResult:
    res = SuiteResult("lemma31")
    cases = [(set(), max_n, max_n // 2), (set(range(1, max_n + 1)), max_n, max_n // 2)]
    for _ in range(trials):
        n = rng.randint(1, max_n)
        N = rng.randint(0, n)
        S = {i for i in range(1, n + 1) if rng.random() < 0.5}
        cases.append((S, n, N))
    for S, n, N in cases:
        res.trials += 1
        if not verify_partition(S, n, N):
            res.fail(f"S={sorted(S)} n={n} N={N}: partition check failed")
    return res


def suite_measures(rng, trials=200, max_n=8, max_N=4) -> SuiteResult:
    res = SuiteResult("measures")
    for _ in range(trials):
        n, N = _sizes(rng, max_n, max_N)
        spec = random_member(rng, n, N)
        d = canonical_decompose(spec, N)
        psi = random_state(rng, n, N)
        mu, mu_t = occupation_measures(psi)
        res.trials += 1
        if sum(mu) != N:
            res.fail(f"n={n} N={N}: occupations sum to {format_scalar(sum(mu))}")
        if sum(mu) + sum(mu_t) != n:
            res.fail(f"n={n} N={N}: occupations plus vacancies sum to {format_scalar(sum(mu) + sum(mu_t))}")
        # direct sum over determinants, bypassing the decomposition
        vals = spec.by_label()
        direct = sum(
            (p * sum(vals[i] for i in range(n) if b >> i & 1) for b, p in psi.probabilities().items()),
            Fraction(0),
        )
        got = pseudo_expectation(d, psi)
        if got != direct:
            res.fail(f"n={n} N={N}: weighted measures {format_scalar(got)} != expectation {format_scalar(direct)}")
    return res


SUITES: Dict[str, Callable] = {
    "membership": suite_membership,
    "roundtrip": suite_roundtrip,
    "threeway": suite_threeway,
    "pov": suite_pov,
    "kernel_formula": suite_kernel_formula,
    "lemma31": suite_partition,
    "measures": suite_measures,
}

# per-suite ceilings on n so a large --max-n stays fast
_N_CAPS = {
    "membership": 14, "roundtrip": 14, "threeway": 10, "pov": 8,
    "kernel_formula": 12, "lemma31": 20, "measures": 8,
}


def run_suites(
    names: Optional[List[str]] = None, seed: int = 0, trials: int = 100, max_n: int = 10,
) -> List[SuiteResult]:
    """Run the named suites (all by default), each from its own seeded stream."""
    names = list(SUITES) if not names else names
    out = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
        rng = random.Random(f"{seed}:{name}")
        cap = min(max_n, _N_CAPS[name])
        if name == "kernel_formula":
            # three-block models need at least 4 orbitals
            out.append(SUITES[name](rng, trials, max(cap, 4)))
        else:
            out.append(SUITES[name](rng, trials, cap))
    return out
