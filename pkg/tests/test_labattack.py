import itertools
import math
import random
from fractions import Fraction

import pytest

from rqcag.estimator import nhrsd_success_probability, rsl_polynomial_threshold
from rqcag.f2linalg import Subspace, rank_weight, sample_basis, support
from rqcag.labattack import (Exhausted, gen_nhrsd_instance, gen_rsl_instance, nhrsd_guess_and_solve,
                             nhrsd_try, nhrsd_unique, rsl_combinatorial_attack, rsl_default_r1,
                             rsl_guess_probability, rsl_polynomial_regime_demo, rsl_shift, rsl_try,
                             sample_guess_event, solve_with_support)


def hmul(F, H, e):
    return [0 if not row else _dot(F, row, e) for row in H]


def _dot(F, a, b):
    acc = 0
    for x, y in zip(a, b):
        acc ^= F.mul(x, y)
    return acc


def test_rsl_instance_is_consistent(rng):
    inst = gen_rsl_instance(rng, 8, 12, 6, 2, 8)
    F = inst.F
    assert len(inst.H) == 6 and len(inst.H[0]) == 12
    for e, s in zip(inst.errors, inst.syndromes):
        assert hmul(F, inst.H, e) == s
        assert support([e], 8).issubspace(inst.hidden)
    assert support(inst.errors, 8) == inst.hidden and inst.hidden.dim == 2


def test_solve_with_support_recovers_planted_error(rng):
    inst = gen_rsl_instance(rng, 10, 12, 4, 2, 3)
    F = inst.F
    for e, s in zip(inst.errors, inst.syndromes):
        got = solve_with_support(F, inst.H, s, list(inst.hidden.basis))
        assert got == e
    # a support missing the hidden one cannot explain a generic syndrome
    other = sample_basis(rng, 2, 10)
    if not inst.hidden.issubspace(Subspace.span(10, other)):
        assert solve_with_support(F, inst.H, inst.syndromes[0], other) is None


def test_guess_probability_by_enumeration():
    # planes of F_2^4 containing a fixed line: 7 of 35
    assert rsl_guess_probability(4, 1, 2) == Fraction(1, 5)
    m, r, r1 = 5, 2, 3
    fixed = Subspace.span(m, [1, 2])
    spaces = set()
    for vs in itertools.combinations(range(1, 1 << m), r1):
        S = Subspace.span(m, list(vs))
        if S.dim == r1:
            spaces.add(S.basis)
    hits = sum(fixed.issubspace(Subspace.span(m, list(b))) for b in spaces)
    assert rsl_guess_probability(m, r, r1) == Fraction(hits, len(spaces))
    # the toy calibration point is close to 2^-r(m - r1)
    assert abs(float(rsl_guess_probability(8, 2, 6)) - 2 ** -4) < 0.003


def test_shift_keeps_a_nonzero_combination():
    assert rsl_shift(8, 2) == 3 and rsl_shift(9, 2) == 4 and rsl_shift(1, 5) == 0
    for N in range(1, 40):
        for r in range(1, 6):
            a = rsl_shift(N, r)
            assert a * r < N <= (a + 1) * r


def test_rsl_try_succeeds_exactly_when_guess_holds():
    rng = random.Random(8)
    inst = gen_rsl_instance(rng, 8, 12, 6, 2, 8)
    assert rsl_default_r1(8, 12, 6, 8, 2) == (8 * 6 - 8) // (12 - 3)
    seen = 0
    for _ in range(150):
        res, rec, errors = rsl_try(inst, 6, rng)
        assert res.success == res.guess_holds
        if res.success:
            seen += 1
            assert rec == inst.hidden
            assert errors == inst.errors
    assert seen > 0


def test_rsl_attack_recovers_support():
    rng = random.Random(3)
    inst = gen_rsl_instance(rng, 8, 12, 6, 2, 8)
    res = rsl_combinatorial_attack(inst, rng=rng)
    assert res.support == inst.hidden and res.errors == inst.errors and res.tries >= 1
    with pytest.raises(Exhausted):
        rsl_combinatorial_attack(gen_rsl_instance(rng, 12, 12, 6, 2, 8), r1=2, max_tries=3, rng=rng)
    with pytest.raises(ValueError):
        rsl_combinatorial_attack(inst, r1=1)


def test_above_threshold_first_guess_is_enough():
    rng = random.Random(4)
    thr = rsl_polynomial_threshold(10, 14, 4, 2)
    assert thr == 11
    for _ in range(10):
        inst = gen_rsl_instance(rng, 10, 14, 4, 2, thr + 1)
        assert rsl_combinatorial_attack(inst, 10, 1, rng).support == inst.hidden


def test_poly_demo_small():
    demo = rsl_polynomial_regime_demo(random.Random(5), 10, 14, 4, 2, reps=8, below_tries=20)
    assert demo.threshold == 11
    assert demo.success_rate_above() == 1.0
    assert 0 <= demo.per_try_below() <= 1
    assert demo.predicted_below == float(rsl_guess_probability(10, 2, demo.r1_below))
    text = demo.transcript()
    assert text.startswith("# threshold 11") and text.count("above") == 8


# ------------------------------------------------------------------ NHRSD

def test_nhrsd_instance_shape(rng):
    inst = gen_nhrsd_instance(rng, 9, 6, 4, 1, 1)
    e1, e2, e3 = inst.split(inst.e)
    assert rank_weight(e1 + e3) == 1 and rank_weight(e2) == 2
    assert support([e1 + e3], 9).issubspace(support([e2], 9))
    assert hmul(inst.F, inst.H, inst.e) == inst.s
    assert len(inst.H) == 10 and len(inst.H[0]) == 16


def test_nhrsd_try_success_is_the_guess_event():
    rng = random.Random(6)
    assert nhrsd_unique(7, 4, 3, 3, 2)
    hits = 0
    for _ in range(10):
        inst = gen_nhrsd_instance(rng, 7, 4, 3, 1, 1)
        for _ in range(150):
            res = nhrsd_try(inst, 3, 2, rng)
            assert res.success == res.guess_holds
            if res.success:
                hits += 1
                assert res.error == inst.e
    assert hits > 0


def test_nhrsd_guess_and_solve_finds_planted_error():
    rng = random.Random(7)
    inst = gen_nhrsd_instance(rng, 7, 4, 3, 1, 1)
    e, tries = nhrsd_guess_and_solve(inst, 3, 2, rng=rng)
    assert e == inst.e and tries >= 1
    with pytest.raises(ValueError):
        nhrsd_guess_and_solve(inst, 0, 2)


def test_guess_event_sampler_matches_probability():
    rng = random.Random(9)
    T = 20_000
    for args in [(6, 1, 1, 2, 2), (8, 1, 1, 3, 2)]:
        p = float(nhrsd_success_probability(2, *args).pi)
        got = sum(sample_guess_event(rng, *args) for _ in range(T)) / T
        assert abs(got - p) < 4 * math.sqrt(p * (1 - p) / T), args
