"""One test per acceptance criterion; each records a PASS/FAIL line shown in the summary.

All arithmetic is exact (rational mode, tolerance 0) unless a line says otherwise.
Criteria that disagree with exhaustive enumeration are marked strict xfail: they
run in full, print FAIL with the numbers, and turn red if they ever pass.
"""
import itertools
import math
import random
import time
from fractions import Fraction as F

import pytest

from conftest import record_acceptance
from fermicone.checks import random_member, random_model74, random_spectrum, random_state
from fermicone.decompositions import (
    ManyBodyState,
    grassmann_factor_space,
    occupation_measures,
    pseudo_expectation,
    pseudo_spectral,
    realize,
    semi_spectral,
    spectral,
)
from fermicone.dual_cone import (
    ExtremeElement,
    ExtremeKind,
    KernelRelation,
    canonical_decompose,
    is_extreme,
    kernel_compare,
    reconstruct,
)
from fermicone.fock import build_one_body_diagonal, identity_operator, verify_partition
from fermicone.models import (
    COLLECTIVE,
    TypeIIParams,
    TypeIParams,
    build_thm74,
    kernel_dimension_74,
    type_i_model,
    type_ii_model,
)
from fermicone.spectral import OneBodySpectrum, is_dual_cone_member
from oracles import brute_levels
from test_dual_cone import _grid, in_families

TIME_LIMIT_S = 60.0
SEED = 20240


def _sizes(rng, max_n, max_N):
    n = rng.randint(1, max_n)
    return n, rng.randint(1, min(n, max_N))


def _int_min_over_subsets(vals, N):
    den = math.lcm(*(v.denominator for v in vals))
    ints = [v.numerator * (den // v.denominator) for v in vals]
    return min(sum(c) for c in itertools.combinations(ints, N))


def test_criterion_01_membership_matches_enumeration():
    rng = random.Random(SEED + 1)
    t0 = time.perf_counter()
    disagree = members = 0
    for k in range(1000):
        n, N = _sizes(rng, 12, 6)
        spec = random_spectrum(rng, n) if k % 2 else random_member(rng, n, N)
        oracle = _int_min_over_subsets(spec.by_label(), N) >= 0
        got = bool(is_dual_cone_member(spec, N))
        members += got
        disagree += got != oracle
    elapsed = time.perf_counter() - t0
    ok = disagree == 0 and elapsed <= TIME_LIMIT_S
    record_acceptance(1, ok, f"1000 spectra (n<=12, N<=6), {members} members, "
                             f"{disagree} disagreements with enumeration, {elapsed:.1f}s (limit {TIME_LIMIT_S:.0f}s)")
    assert ok


def test_criterion_02_canonical_roundtrip():
    rng = random.Random(SEED + 2)
    bad_recon = bad_sign = 0
    for _ in range(1000):
        n, N = _sizes(rng, 12, 6)
        spec = random_member(rng, n, N)
        d = canonical_decompose(spec, N)
        bad_recon += reconstruct(d).by_label() != spec.by_label()
        bad_sign += not (all(g > 0 for g in d.gammas[: d.r]) and all(g >= 0 for g in d.gammas[d.r:]))
    ok = bad_recon == 0 and bad_sign == 0
    record_acceptance(2, ok, f"1000 members: {bad_recon} inexact reconstructions, {bad_sign} sign-contract violations")
    assert ok


def test_criterion_03_three_way_equality():
    rng = random.Random(SEED + 3)
    bad = 0
    for _ in range(500):
        n, N = _sizes(rng, 10, 5)
        spec = random_member(rng, n, N)
        d = canonical_decompose(spec, N)
        ops = [realize(spectral(spec, N)), realize(semi_spectral(spec, N)), realize(pseudo_spectral(d))]
        direct = build_one_body_diagonal(spec, N)
        bad += not all(list(op.entries) == list(direct.entries) for op in ops)
    record_acceptance(3, bad == 0, f"500 members (n<=10, N<=5): {bad} cases where the realizations differ entrywise")
    assert bad == 0


def test_criterion_04_pov_normalization():
    rng = random.Random(SEED + 4)
    bad = []
    for _ in range(150):
        n, N = _sizes(rng, 8, 5)
        spec = random_member(rng, n, N)
        d = canonical_decompose(spec, N)
        one = identity_operator(n, N)
        pairs = {
            "semi normalized = I": semi_spectral(spec, N, normalized=True).total_effect() == one,
            "pseudo normalized = I": pseudo_spectral(d, normalized=True).total_effect() == one,
            "semi raw = N I": semi_spectral(spec, N).total_effect() == one * N,
            "pseudo raw = n I": pseudo_spectral(d).family().total_effect() == one * n,
        }
        bad += [k for k, v in pairs.items() if not v]
    record_acceptance(4, not bad, f"150 members x 4 families: {len(bad)} sums off the identity {sorted(set(bad))}")
    assert not bad


@pytest.mark.xfail(strict=True, reason="the lowest positive levels are not always the weights; see the printed counterexample")
def test_criterion_05_three_block_model():
    rng = random.Random(SEED + 5)
    t0 = time.perf_counter()
    bad_kernel = bad_min = bad_lowest = 0
    example = None
    for _ in range(200):
        p = random_model74(rng, 12)
        spec, d = build_thm74(p)
        oracle = brute_levels(spec.by_label(), p.N)
        bad_kernel += oracle[0] != (0, kernel_dimension_74(p))
        bad_min += oracle[0][0] != 0
        weights = sorted(set(d.gamma_by_label()[: p.m]))
        lowest = [v for v, _ in oracle if v > 0][: len(weights)]
        if lowest != weights:
            bad_lowest += 1
            if example is None:
                example = (spec.by_label(), p.N, weights, lowest)
    elapsed = time.perf_counter() - t0
    ok = bad_kernel == bad_min == bad_lowest == 0 and elapsed <= TIME_LIMIT_S
    detail = (f"200 models (n<=12): kernel formula misses {bad_kernel}, min-level misses {bad_min}, "
              f"lowest-positive-levels != weights in {bad_lowest}, {elapsed:.1f}s")
    if example:
        vals, N, w, low = example
        detail += (f"; e.g. values {[str(v) for v in vals]} N={N}: weights {[str(x) for x in w]}"
                   f" vs lowest positive levels {[str(x) for x in low]}")
    record_acceptance(5, ok, detail)
    assert ok


def test_criterion_06_type_i_instance():
    spec, diagram = type_i_model(TypeIParams(4, -1, (F(7, 2), 4, F(9, 2)), 8))
    oracle = brute_levels(spec.by_label(), 4)
    head = [(lv.eigenvalue, lv.degeneracy) for lv in diagram.levels[:3]]
    want = [(0, 3), (2, 2), (F(5, 2), 3)]
    formula = 2 * math.comb(3, 3)
    flagged = any("variant" in n and "does not match" in n for n in diagram.notes)
    ok = (
        head == want == oracle[:3]
        and sum(c for _, c in oracle) == 70
        and diagram.level_at(2).degeneracy == formula
        and diagram.level_at(2).classification == COLLECTIVE
        and flagged
    )
    record_acceptance(6, ok, f"levels/degeneracies {[(str(v), k) for v, k in head]} over 70 states, "
                             f"collective degeneracy = (N/2)C(k,N/2+1) = {formula}, variant flagged={flagged}")
    assert ok


@pytest.mark.xfail(strict=True, reason="enumeration gives degeneracy 5 at level 6: |5678> also has eigenvalue 6")
def test_criterion_07_type_ii_instance():
    spec, diagram = type_ii_model(TypeIIParams(4, -2, F(1, 2), (F(15, 2), 8), 8))
    oracle = brute_levels(spec.by_label(), 4)
    head = [(lv.eigenvalue, lv.degeneracy) for lv in diagram.levels[:4]]
    values_ok = [v for v, _ in head] == [0, F(1, 2), F(11, 2), 6]
    degs = [k for _, k in head]
    gap_ok = diagram.checks["gap_ordering"]["pass"]
    flagged = any("−(β+2α)" in n for n in diagram.notes)
    ok = head == oracle[:4] and values_ok and degs == [6, 4, 4, 4] and gap_ok and flagged
    record_acceptance(7, ok, f"levels {[str(v) for v, _ in head]} ok={values_ok}; degeneracies {degs} "
                             f"(required (6, 4, 4, 4)); collectives inside gap={gap_ok}; −(β+2α) flagged={flagged}")
    assert ok


def test_criterion_08_measures():
    rng = random.Random(SEED + 8)
    bad = 0
    for _ in range(200):
        n, N = _sizes(rng, 8, 4)
        spec = random_member(rng, n, N)
        psi = random_state(rng, n, N)
        mu, mu_t = occupation_measures(psi)
        lhs = pseudo_expectation(canonical_decompose(spec, N), psi)
        op = build_one_body_diagonal(spec, N)
        rhs = sum(p * op.entries[_index(b, n, N)] for b, p in psi.probabilities().items())
        bad += not (sum(mu) == N and sum(mu) + sum(mu_t) == n and lhs == rhs)
    record_acceptance(8, bad == 0, f"200 random states: {bad} violations of sum mu = N, sum(mu + mu~) = n, "
                                   "or the expectation identity (exact)")
    assert bad == 0


def _index(bits, n, N):
    occ = tuple(i for i in range(n) if bits >> i & 1)
    return list(itertools.combinations(range(n), N)).index(occ)


def test_criterion_09_grassmann_factors():
    det = grassmann_factor_space(ManyBodyState.determinant([1, 2, 3], 5))
    pair = grassmann_factor_space(ManyBodyState.from_terms(4, 2, [([1, 2], 1, 0), ([3, 4], 1, 0)], normalize=True))
    trip = grassmann_factor_space(
        ManyBodyState.from_terms(5, 3, [([1, 2, 3], 1, 0), ([1, 4, 5], 1, 0)], normalize=True))
    got = [(det.dimension, det.factors), (pair.dimension, pair.factors), (trip.dimension, trip.factors)]
    ok = got == [(3, (1, 2, 3)), (0, ()), (1, (1,))]
    record_acceptance(9, ok, f"determinant/paired/three-orbital factor spaces = {got}")
    assert ok


def test_criterion_10_extremality():
    mismatches = checked = 0
    for n in range(2, 7):
        for N in range(1, n):
            for vals in _grid(n, N):
                spec = OneBodySpectrum.from_values(vals)
                if not is_dual_cone_member(spec, N):
                    continue
                checked += 1
                mismatches += (is_extreme(spec, N) is not None) != in_families(vals, N)
    chain = kernel_compare(
        OneBodySpectrum.from_values([-1, -1, 2, 2, 2]),
        OneBodySpectrum.from_values([-1, F(1, 2), F(1, 2), F(1, 2), F(1, 2)]), 3)
    h1, h2 = (ExtremeElement(ExtremeKind.HOLE_EXTREME, i).spectrum(5, 3) for i in (1, 2))
    incomparable = kernel_compare(h1, h2, 3)
    ok = mismatches == 0 and chain is KernelRelation.A_IN_B and incomparable is KernelRelation.INCOMPARABLE
    record_acceptance(10, ok, f"{checked} grid members (n<=6): {mismatches} family mismatches; "
                              f"kernel chain {chain.value}; hole kernels {incomparable.value}")
    assert ok


def test_criterion_11_partition():
    rng = random.Random(SEED + 11)
    cases = [(set(), 16, 8), (set(range(1, 17)), 16, 8), (set(), 5, 0), (set(range(1, 6)), 5, 5)]
    while len(cases) < 200:
        n = rng.randint(1, 16)
        N = rng.randint(0, min(n, 8))
        cases.append(({i for i in range(1, n + 1) if rng.random() < 0.5}, n, N))
    bad = sum(not verify_partition(S, n, N) for S, n, N in cases)
    record_acceptance(11, bad == 0, f"{len(cases)} (S, n, N) with n<=16 incl. S empty/full: {bad} failures")
    assert bad == 0
