"""Linearized (q-)polynomials over GF(2^m), q = 2.

P = sum p_i X^(2^i) is stored as its coefficient list [p_0, p_1, ...].
Multiplication in this ring is composition, which is not commutative;
division is on the left: R = V o Q + rem.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .f2linalg import Subspace, echelon
from .field import GF2m

NEG_INF = float("-inf")


class DivisionByZero(ZeroDivisionError):
    pass


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


class QPoly:
    __slots__ = ("F", "c")

    def __init__(self, F: GF2m, coeffs: Iterable[int] = ()):
        self.F = F
        self.c = _trim(list(coeffs))

    # constructors
    @classmethod
    def zero(cls, F):
        return cls(F)

    @classmethod
    def x(cls, F):
        """The identity map X."""
        return cls(F, [1])

    @classmethod
    def monomial(cls, F, a: int, i: int):
        """a X^(2^i)."""
        return cls(F, [0] * i + [a])

    def __repr__(self):
        return f"QPoly({self.c})"

    def __eq__(self, other):
        return isinstance(other, QPoly) and self.F == other.F and self.c == other.c

    def __hash__(self):
        return hash(tuple(self.c))

    @property
    def q_degree(self):
        return len(self.c) - 1 if self.c else NEG_INF

    def is_zero(self) -> bool:
        return not self.c

    def lead(self) -> int:
        return self.c[-1] if self.c else 0

    def is_monic(self) -> bool:
        return self.lead() == 1

    def coeff(self, i: int) -> int:
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __add__(self, other: "QPoly") -> "QPoly":
        n = max(len(self.c), len(other.c))
        return QPoly(self.F, [self.coeff(i) ^ other.coeff(i) for i in range(n)])

    __sub__ = __add__

    def scale(self, a: int) -> "QPoly":
        """a * P (left multiplication by a scalar)."""
        if not self.c:
            return self
        F = self.F
        n = len(self.c)
        return QPoly(F, F.unpack(F.vscale(a, F.pack(self.c), n), n))

    def __call__(self, a: int) -> int:
        return evaluate(self, a)

    def __matmul__(self, other: "QPoly") -> "QPoly":
        return compose(self, other)


def evaluate(P: QPoly, a: int) -> int:
    """P(a) = sum p_i a^(2^i)."""
    F = P.F
    r = 0
    for p in P.c:
        if p:
            r ^= F.mul(p, a)
        a = F.sq(a)
    return r


def evaluate_many(P: QPoly, points: Sequence[int]) -> list[int]:
    """P at every point, using packed arithmetic over the point vector."""
    F = P.F
    n = len(points)
    if not n:
        return []
    x = F.pack(points)
    acc = 0
    for i, p in enumerate(P.c):
        if i:
            x = F.vsquare(x, n)
        if p:
            acc ^= F.vscale(p, x, n)
    return F.unpack(acc, n)


def compose(A: QPoly, B: QPoly) -> QPoly:
    """A o B; coefficient k is sum_{i+j=k} a_i b_j^(2^i)."""
    F = A.F
    if A.is_zero() or B.is_zero():
        return QPoly(F)
    nb = len(B.c)
    n = len(A.c) + nb - 1
    b = F.pack(B.c)
    acc = 0
    for i, a in enumerate(A.c):
        if i:
            b = F.vsquare(b, nb)
        if a:
            acc ^= F.vscale(a, b, nb) << (i * F.slot)
    return QPoly(F, F.unpack(acc, n))


def left_divide(R: QPoly, V: QPoly) -> tuple[QPoly, QPoly]:
    """(Q, rem) with R = V o Q + rem and q_degree(rem) < q_degree(V)."""
    F = R.F
    if V.is_zero():
        raise DivisionByZero("division by the zero q-polynomial")
    dv = len(V.c) - 1
    inv_lead = F.inv(V.c[-1])
    r = list(R.c)
    q = [0] * max(len(r) - dv, 0)
    for s in range(len(r) - 1 - dv, -1, -1):
        top = r[s + dv]
        if not top:
            continue
        # v_dv * qs^(2^dv) = top
        qs = F.frobenius(F.mul(top, inv_lead), F.m - dv % F.m)
        q[s] = qs
        t = qs
        for i, v in enumerate(V.c):
            if i:
                t = F.sq(t)
            if v:
                r[s + i] ^= F.mul(v, t)
        assert r[s + dv] == 0
    return QPoly(F, q), QPoly(F, r[:dv])


def annihilator(F: GF2m, basis: Sequence[int] | Subspace) -> QPoly:
    """Monic q-polynomial of q-degree dim vanishing exactly on span(basis).

    Built one basis vector at a time: V <- (X^2 - V(b) X) o V.
    """
    if isinstance(basis, Subspace):
        basis = basis.basis
    basis = echelon(basis)
    d = len(basis)
    coeffs = 1  # packed coefficient vector, capacity d + 1 slots
    n = d + 1
    imgs = F.pack(basis) if d else 0  # V evaluated at each basis vector
    S = F.slot
    for i in range(d):
        c = F.vget(imgs, i)
        coeffs = (F.vsquare(coeffs, n) << S) ^ F.vscale(c, coeffs, n)
        coeffs &= (1 << (n * S)) - 1
        imgs = F.vsquare(imgs, d) ^ F.vscale(c, imgs, d)
    return QPoly(F, F.unpack(coeffs, n))


def min_support_poly(F: GF2m, v: Sequence[int]) -> QPoly:
    """Annihilator of the support of v; its q-degree is the rank weight of v."""
    return annihilator(F, echelon(v))
