"""Acceptance criteria 1-13, one PASS/FAIL line each.

The lines are collected in LINES and printed in the terminal summary (see
conftest.py). Criteria that cannot be met are strict xfails: they still
print FAIL, and they would flip to an error if they ever started passing.
"""
import math
import random
import time

import pytest

from rqcag.cli import kb
from rqcag.estimator import (design_costs, nhrsd_success_probability, rsd_maxminors_bits,
                             rsl_algebraic_cases, rsl_combinatorial_bits, rsl_polynomial_threshold)
from rqcag.f2linalg import Subspace, sample_subspace
from rqcag.field import field
from rqcag.gabidulin import dfr_monte_carlo, dfr_probability
from rqcag.ideal import IdealRing, fold, unfold
from rqcag.labattack import (gen_nhrsd_instance, gen_rsl_instance, nhrsd_try,
                             rsl_polynomial_regime_demo, rsl_try, sample_guess_event)
from rqcag.qpoly import QPoly, annihilator, compose, left_divide
from rqcag.scheme import PARAMS, decrypt, encrypt, keygen, seed_bytes, sizes

LINES: list[str] = []

# pk bytes, ct bytes, pk KB, ct KB as published
TABLE = {
    "multi-rqc-ag-128": (435, 3943, "0.4", "3.9"),
    "nh-multi-rqc-ag-128": (422, 2288, "0.4", "2.3"),
    "multi-rqc-ag-192": (888, 6780, "0.9", "6.8"),
    "nh-multi-rqc-ag-192": (979, 3753, "0.9", "3.8"),
    "multi-ur-ag-128": (4114, 6912, "4.1", "6.9"),
    "nh-multi-ur-ag-128": (2650, 4472, "2.7", "4.5"),
    "multi-ur-ag-192": (8375, 12700, "8.4", "12.7"),
    "nh-multi-ur-ag-192": (5133, 7469, "5.1", "7.5"),
}
CAPACITY = {"multi-rqc-ag-128": 77, "nh-multi-rqc-ag-128": 54, "multi-rqc-ag-192": 104,
            "nh-multi-rqc-ag-192": 69, "multi-ur-ag-128": 88, "nh-multi-ur-ag-128": 68,
            "multi-ur-ag-192": 108, "nh-multi-ur-ag-192": 85}
DFR = {"multi-rqc-ag-128": -138, "nh-multi-rqc-ag-128": -158, "multi-rqc-ag-192": -215,
       "nh-multi-rqc-ag-192": -238, "multi-ur-ag-128": -190, "nh-multi-ur-ag-128": -133,
       "multi-ur-ag-192": -350, "nh-multi-ur-ag-192": -214}
FIG = (61, 100, 50, 7)


def emit(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    LINES.append(line)
    print(line)


def within(measured: float, p: float, trials: int, k: float = 3.0) -> tuple[bool, float]:
    sigma = math.sqrt(p * (1 - p) / trials)
    return abs(measured - p) <= k * sigma, sigma


# ---------------------------------------------------------------------- 1

def _byte_sizes_ok():
    rng = random.Random(1)
    bad = []
    for name, p in PARAMS.items():
        kp = keygen(p, rng)
        ct = encrypt(kp.pk, [0] * p.k, seed_bytes(rng))
        pk_b, ct_b = TABLE[name][:2]
        if not (sizes(p) == (pk_b, ct_b) == (len(kp.pk.to_bytes()), len(ct.to_bytes()))):
            bad.append(name)
    return bad


def test_criterion_01_byte_sizes():
    assert _byte_sizes_ok() == []


@pytest.mark.xfail(strict=True, reason="NH-Multi-RQC-AG-192 pk is 979 bytes by the size formula, "
                                       "which rounds to 1.0 KB, not the tabulated 0.9 KB")
def test_criterion_01():
    t0 = time.time()
    bad_bytes = _byte_sizes_ok()
    bad_kb = [f"{name} pk {p.pk_bytes} B -> {kb(p.pk_bytes)} KB (table {TABLE[name][2]})"
              for name, p in PARAMS.items() if kb(p.pk_bytes) != TABLE[name][2]]
    bad_kb += [f"{name} ct {p.ct_bytes} B -> {kb(p.ct_bytes)} KB (table {TABLE[name][3]})"
               for name, p in PARAMS.items() if kb(p.ct_bytes) != TABLE[name][3]]
    ok = not bad_bytes and not bad_kb
    emit(1, ok, f"bytes exact for {8 - len(bad_bytes)}/8 sets; KB mismatches: "
                f"{'; '.join(bad_kb) or 'none'} ({time.time() - t0:.2f} s)")
    assert ok


# ---------------------------------------------------------------------- 2

def test_criterion_02():
    bad = [n for n, p in PARAMS.items()
           if not (p.delta == (p.n_prime - p.k + p.epsilon) // 2 == p.w * p.w1 + p.w2 == CAPACITY[n])]
    emit(2, not bad, "delta = floor((n'-k+eps)/2) = w*w1 + w2 for all 8 sets"
         + (f"; broken: {bad}" if bad else ""))
    assert not bad


# ---------------------------------------------------------------------- 3

@pytest.mark.slow
def test_criterion_03():
    cycles = 1000
    t0 = time.time()
    fails = {}
    for name, p in PARAMS.items():
        rng = random.Random("rt-" + name)
        f = 0
        for _ in range(cycles):
            kp = keygen(p, rng)
            msg = [rng.getrandbits(p.m) for _ in range(p.k)]
            try:
                f += decrypt(kp.pk, kp.sk, encrypt(kp.pk, msg, seed_bytes(rng))) != msg
            except Exception:
                f += 1
        fails[name] = f
    total = sum(fails.values())
    emit(3, total == 0, f"{cycles} keygen/encrypt/decrypt cycles x 8 sets, {total} failures "
                        f"({time.time() - t0:.0f} s)")
    assert total == 0


# ---------------------------------------------------------------------- 4

def test_criterion_04():
    diffs = {n: PARAMS[n].dfr_bits() - DFR[n] for n in PARAMS}
    worst = max(diffs.values(), key=abs)
    ok = all(abs(d) <= 3 for d in diffs.values())
    emit(4, ok, "dfr_bits vs table: " + ", ".join(f"{PARAMS[n].dfr_bits():.1f}/{DFR[n]}" for n in PARAMS)
         + f"; worst gap {worst:+.2f} bits")
    assert ok


# ---------------------------------------------------------------------- 5

@pytest.mark.slow
def test_criterion_05():
    trials = 10 ** 6
    rng = random.Random(55)
    parts, ok = [], True
    for delta, tail, eps in [(6, 8, 5), (4, 4, 4), (10, 10, 9)]:
        p = float(dfr_probability(delta, tail, eps))
        got = dfr_monte_carlo(rng, delta, tail, eps, trials)
        good, sigma = within(got, p, trials)
        ok &= good
        parts.append(f"({delta},{tail},{eps}) {got:.5f} vs {p:.5f} ({(got - p) / sigma:+.2f} sigma)")
    emit(5, ok, f"{trials} trials each: " + "; ".join(parts))
    assert ok


# ---------------------------------------------------------------------- 6

def test_criterion_06():
    spots = {50: 203, 104: 189, 134: 175, 218: 140, 296: 98}
    got = {N: rsl_combinatorial_bits(*FIG, N).bits for N in spots}
    ok = got == spots
    emit(6, ok, "rsl-comb at N=" + ", ".join(f"{N}:{got[N]:g}" for N in spots))
    assert ok


# ---------------------------------------------------------------------- 7

def test_criterion_07():
    rep = rsd_maxminors_bits(*FIG, omega=2.81)
    ok = abs(rep.bits - 196) <= 1
    emit(7, ok, f"rsd-mm(61,100,50,7) = {rep.bits:.2f} bits at a = {rep.params['a']} (target 196 +- 1)")
    assert ok


# ---------------------------------------------------------------------- 8

def _branch_min(N, case, branch):
    return min(r.bits for r in rsl_algebraic_cases(*FIG, N)
               if r.params["case"] == case and r.params["branch"] == branch)


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="the algebraic cost formula as printed gives about 201 bits at "
                                       "N=44 and 217/218 at N=101; the plotted 138 and 186/187 "
                                       "plateaus are not reproduced")
def test_criterion_08():
    a = min(_branch_min(44, "delta=0", b) for b in ("strassen", "wiedemann"))
    s = _branch_min(101, "delta>0", "strassen")
    w = _branch_min(101, "delta>0", "wiedemann")
    ok = abs(a - 138) <= 3 and abs(s - 186) <= 3 and abs(w - 187) <= 3
    emit(8, ok, f"rsl-alg N=44 delta=0: {a:.2f} (target 138); N=101 delta>0: {s:.2f}/{w:.2f} "
                f"(target 186/187)")
    assert ok


# ---------------------------------------------------------------------- 9

@pytest.mark.slow
def test_criterion_09():
    t0 = time.time()
    thr = rsl_polynomial_threshold(*FIG)
    demo = rsl_polynomial_regime_demo(random.Random(99), 10, 14, 4, 2, reps=100, tries=5)
    rate = demo.success_rate_above()
    ok = thr == 396 and demo.threshold == 11 and rate >= 0.95
    emit(9, ok, f"threshold {thr} for [61,100,50,7]; toy threshold {demo.threshold}, success within "
                f"5 tries at N={demo.above[0][0]}: {rate:.2f} over 100 runs ({time.time() - t0:.0f} s)")
    assert ok


# --------------------------------------------------------------------- 10

def _all_subspaces(m, dim):
    seen = set()
    import itertools
    for vs in itertools.combinations(range(1, 1 << m), dim):
        S = Subspace.span(m, list(vs))
        if S.dim == dim:
            seen.add(S.basis)
    return seen


@pytest.mark.slow
def test_criterion_10():
    from fractions import Fraction
    parts, ok = [], True
    planes = _all_subspaces(4, 2)
    line = Subspace.span(4, [1])
    exact = Fraction(sum(line.issubspace(Subspace.span(4, list(b))) for b in planes), len(planes))
    pi = nhrsd_success_probability(2, 4, 1, 0, 2, 0).pi
    ok &= pi == exact == Fraction(1, 5)
    parts.append(f"Pi(m=4,w1=1,r=2) = {pi} (enumeration {exact})")

    rng = random.Random(1010)
    T = 10 ** 5
    for args in [(6, 1, 1, 2, 2), (8, 1, 1, 3, 2)]:
        p = float(nhrsd_success_probability(2, *args).pi)
        got = sum(sample_guess_event(rng, *args) for _ in range(T)) / T
        good, sigma = within(got, p, T)
        ok &= good
        parts.append(f"MC {args} {got:.5f} vs {p:.5f} ({(got - p) / sigma:+.2f} sigma)")

    for (m, n, n1, r, rho), runs in [((9, 6, 4, 2, 2), 500), ((7, 4, 3, 3, 2), 3000)]:
        p = float(nhrsd_success_probability(2, m, 1, 1, r, rho).pi)
        hits = sum(nhrsd_try(gen_nhrsd_instance(rng, m, n, n1, 1, 1), r, rho, rng).success
                   for _ in range(runs))
        good, sigma = within(hits / runs, p, runs)
        ok &= good
        parts.append(f"attack m={m} r={r} rho={rho}: {hits}/{runs} vs Pi {p:.5f}")
    emit(10, ok, "; ".join(parts))
    assert ok


# --------------------------------------------------------------------- 11

@pytest.mark.slow
def test_criterion_11():
    t0 = time.time()
    rng = random.Random(1111)
    runs = 200
    hits = 0
    for _ in range(runs):
        inst = gen_rsl_instance(rng, 8, 12, 6, 2, 8)
        hits += rsl_try(inst, 6, rng)[0].success
    p = 2.0 ** (-2 * (8 - 6))
    good, sigma = within(hits / runs, p, runs)
    emit(11, good, f"per-try success {hits}/{runs} = {hits / runs:.4f} vs 2^-4 = {p:.4f} "
                   f"({(hits / runs - p) / sigma:+.2f} sigma, {time.time() - t0:.0f} s)")
    assert good


# --------------------------------------------------------------------- 12

def test_criterion_12():
    t0 = time.time()
    worst = []
    ok = True
    for name, p in PARAMS.items():
        extra = [150] if name == "nh-multi-rqc-ag-128" else []
        reps = design_costs(p, extra_N=extra)
        low = min(reps, key=lambda r: r.bits)
        ok &= all(r.bits >= p.level for r in reps)
        worst.append(f"{name} min {low.bits:.0f} ({low.attack}/{low.instance['target']})")
    n150 = [r for r in design_costs(PARAMS["nh-multi-rqc-ag-128"], extra_N=[150])
            if r.attack == "nhrsl-comb" and r.instance["N"] == 150][0]
    ok &= n150.bits >= 128
    emit(12, ok, "; ".join(worst) + f"; NH-RQC-128 with 150 syndromes: {n150.bits:.0f} "
                 f"({time.time() - t0:.1f} s)")
    assert ok


# --------------------------------------------------------------------- 13

def _naive_mul(a, b, mod):
    prod = 0
    for i in range(b.bit_length()):
        if (b >> i) & 1:
            prod ^= a << i
    d = mod.bit_length() - 1
    for i in range(prod.bit_length() - 1, d - 1, -1):
        if (prod >> i) & 1:
            prod ^= mod << (i - d)
    return prod


def _schoolbook_ring(F, P, u, v):
    n = P.bit_length() - 1
    prod = [0] * (2 * n)
    for i, a in enumerate(u):
        for j, b in enumerate(v):
            prod[i + j] ^= F.mul(a, b)
    for d in range(len(prod) - 1, n - 1, -1):
        c, prod[d] = prod[d], 0
        if c:
            for t in range(n):
                if (P >> t) & 1:
                    prod[d - n + t] ^= c
    return prod[:n]


def _rand_poly(rng, F, max_len):
    return QPoly(F, [F.random(rng) for _ in range(rng.randint(0, max_len))])


@pytest.mark.slow
def test_criterion_13():
    t0 = time.time()
    CASES = 10 ** 4
    rng = random.Random(1313)
    fails = {}

    def check(name, cond):
        if not cond:
            fails[name] = fails.get(name, 0) + 1

    for _ in range(CASES):
        F = field(rng.randint(2, 128))
        a, b, c = F.random(rng), F.random(rng), F.random(rng)
        check("field", F.mul(a, b) == F.mul(b, a) == _naive_mul(a, b, F.modulus)
              and F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
              and F.mul(a, b ^ c) == F.mul(a, b) ^ F.mul(a, c)
              and (a == 0 or F.mul(a, F.inv(a)) == 1))

    for _ in range(CASES):
        F = field(rng.randint(2, 16))
        A, B, C = (_rand_poly(rng, F, 4) for _ in range(3))
        x = F.random(rng)
        check("qpoly", compose(compose(A, B), C) == compose(A, compose(B, C))
              and compose(A, B + C) == compose(A, B) + compose(A, C)
              and compose(A + B, C) == compose(A, C) + compose(B, C)
              and compose(A, B)(x) == A(B(x)))

    for _ in range(CASES):
        F = field(rng.randint(2, 40))
        R, V = _rand_poly(rng, F, 7), _rand_poly(rng, F, 5)
        if V.is_zero():
            V = QPoly(F, [1])
        Q, rem = left_divide(R, V)
        check("division", compose(V, Q) + rem == R and (rem.is_zero() or rem.q_degree < V.q_degree))

    for _ in range(CASES):
        m = rng.randint(3, 7)
        F = field(m)
        S = sample_subspace(rng, rng.randint(0, min(m, 4)), m)
        A = annihilator(F, S)
        check("annihilator", {x for x in range(1 << m) if A(x) == 0} == set(S.elements()))

    for i in range(CASES):
        F = field(rng.choice([7, 13, 31, 61]))
        R = IdealRing(F, rng.randint(2, 20))
        u = [F.random(rng) for _ in range(R.n2)]
        v = [F.random(rng) for _ in range(R.n2)]
        uv = R.mul(u, v)
        good = uv == R.mul(v, u)
        if i % 10 == 0:
            good &= uv == _schoolbook_ring(F, R.P, u, v)
        check("ideal", good)

    for _ in range(CASES):
        n1, n2 = rng.randint(1, 8), rng.randint(1, 8)
        v = [rng.getrandbits(8) for _ in range(n1 * n2)]
        M = fold(v, n1, n2)
        check("fold", unfold(M) == v and fold(unfold(M), n1, n2) == M)

    ok = not fails
    emit(13, ok, f"{CASES} cases each of field axioms, q-poly ring laws, left division, annihilator "
                 f"spans, ideal products, fold/unfold; failures: {fails or 0} "
                 f"({time.time() - t0:.0f} s)")
    assert ok
