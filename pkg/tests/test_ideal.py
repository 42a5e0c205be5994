import random

import pytest
from hypothesis import given, strategies as st

from rqcag.f2linalg import sample_basis, sample_full_weight
from rqcag.field import IRREDUCIBLE, f2_is_irreducible, field
from rqcag.ideal import (IdealRing, ShapeMismatch, fold, lowrank_masks, mat_vec_left, unfold,
                         vec_dot_matrix)


def naive_ring_mul(F, P, u, v):
    """Schoolbook product in GF(2^m)[X], then reduction by the F_2 polynomial P."""
    n = P.bit_length() - 1
    prod = [0] * (2 * n - 1)
    for i, a in enumerate(u):
        for j, b in enumerate(v):
            prod[i + j] ^= F.mul(a, b)
    for d in range(len(prod) - 1, n - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for t in range(n):
                if (P >> t) & 1:
                    prod[d - n + t] ^= c
    return prod[:n]


@st.composite
def ring_pairs(draw, count=2):
    m = draw(st.sampled_from([3, 7, 13, 61]))
    n2 = draw(st.integers(min_value=2, max_value=24))
    F = field(m)
    vs = [[draw(st.integers(0, F.mask)) for _ in range(n2)] for _ in range(count)]
    return IdealRing(F, n2), vs


@given(ring_pairs())
def test_product_matches_schoolbook(data):
    R, (u, v) = data
    assert R.mul(u, v) == naive_ring_mul(R.F, R.P, u, v)


@given(ring_pairs(3))
def test_commutative_and_distributive(data):
    R, (u, v, w) = data
    assert R.mul(u, v) == R.mul(v, u)
    vw = [a ^ b for a, b in zip(v, w)]
    assert R.mul(u, vw) == [a ^ b for a, b in zip(R.mul(u, v), R.mul(u, w))]
    assert R.mul(R.mul(u, v), w) == R.mul(u, R.mul(v, w))


@given(ring_pairs(2))
def test_ideal_matrix_product(data):
    R, (u, v) = data
    # v(X) u(X) = sum_i v_i X^i u(X) = v . IM(u)
    assert mat_vec_left(v, R.ideal_matrix(u), R.F) == R.mul(u, v)


@given(ring_pairs(1))
def test_lowrank_product(data):
    R, (u,) = data
    F = R.F
    rng = random.Random(len(u))
    basis = sample_basis(rng, 2, F.m)
    L = sample_full_weight(rng, basis, R.n2, 1)
    col = L.column(0)
    got = R.mul_lowrank_packed(F.pack(u), L.basis, lowrank_masks(L, 0))
    assert F.unpack(got, R.n2) == R.mul(u, col)


def test_vec_dot_matrix_columns():
    rng = random.Random(4)
    F = field(13)
    R = IdealRing(F, 7)
    v = [F.random(rng) for _ in range(7)]
    M = [[F.random(rng) for _ in range(3)] for _ in range(7)]
    out = vec_dot_matrix(R, v, M)
    for j in range(3):
        assert [row[j] for row in out] == R.mul(v, [row[j] for row in M])


def test_x_power_wraps():
    F = field(7)
    R = IdealRing(F, 5)
    assert R.x_power(0) == [1, 0, 0, 0, 0]
    assert R.x_power(5) == [(R.P >> t) & 1 for t in range(5)]


def test_table_polynomials_are_irreducible():
    for n2 in (14, 15, 16, 38, 50, 60, 95):
        assert f2_is_irreducible(IRREDUCIBLE[n2])


def test_validation():
    F = field(5)
    with pytest.raises(ValueError):
        IdealRing(F, 4, 0b10001)        # x^4 + 1 = (x + 1)^4
    with pytest.raises(ValueError):
        IdealRing(F, 4, 0b111)
    with pytest.raises(ShapeMismatch):
        IdealRing(F, 4).mul([1, 2], [1, 2, 3, 4])


@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_fold_unfold_inverse(n1, n2, data):
    v = data.draw(st.lists(st.integers(0, 255), min_size=n1 * n2, max_size=n1 * n2))
    M = fold(v, n1, n2)
    assert len(M) == n2 and all(len(r) == n1 for r in M)
    assert unfold(M) == v
    assert fold(unfold(M), n1, n2) == M
    # column j holds the j-th block of n2 consecutive entries
    assert [r[0] for r in M] == v[:n2]


def test_fold_rejects_bad_length():
    with pytest.raises(ShapeMismatch):
        fold([1, 2, 3], 2, 2)
