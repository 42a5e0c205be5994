"""The ring GF(2^m)[X]/(P) with P irreducible over F_2, ideal matrices, fold/unfold.

Ring elements are coefficient lists of length n2 (index i = coefficient of X^i).
Internally they are handled packed (see `GF2m.pack`), so multiplying by
X^i is a slot shift and reducing mod P is a few shifted XORs.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .f2linalg import LowRank
from .field import IRREDUCIBLE, GF2m, f2_is_irreducible


class ShapeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class IdealRing:
    F: GF2m
    n2: int
    P: int = 0  # bit i = coefficient of X^i; 0 selects the built-in table
    _tail: tuple = dc_field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        P = self.P or IRREDUCIBLE[self.n2]
        if P.bit_length() - 1 != self.n2:
            raise ValueError("P must have degree n2")
        if not f2_is_irreducible(P):
            raise ValueError("P must be irreducible over F_2")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "_tail", tuple(t for t in range(self.n2) if (P >> t) & 1))

    # ------------------------------------------------------------- packed

    def reduce_packed(self, x: int) -> int:
        """Reduce a packed polynomial of any length modulo P."""
        S = self.F.slot
        cut = self.n2 * S
        low = (1 << cut) - 1
        while x >> cut:
            hi = x >> cut
            x &= low
            for t in self._tail:
                x ^= hi << (t * S)
        return x

    def mul_binary_packed(self, u: int, bits: int) -> int:
        """u(X) * b(X) mod P where b has F_2 coefficients (bit mask)."""
        S = self.F.slot
        acc = 0
        i = 0
        while bits:
            if bits & 1:
                acc ^= u << (i * S)
            bits >>= 1
            i += 1
        return self.reduce_packed(acc)

    def mul_packed(self, u: int, v: Sequence[int]) -> int:
        F = self.F
        S = F.slot
        acc = 0
        for j, c in enumerate(v):
            if c:
                acc ^= F.vscale(c, u, self.n2) << (j * S)
        return self.reduce_packed(acc)

    def mul_lowrank_packed(self, u: int, basis: Sequence[int], masks: Sequence[int]) -> int:
        """u * v where v = sum_t basis[t] * b_t(X) and masks[t] is the bit mask of b_t."""
        F = self.F
        acc = 0
        for b, bits in zip(basis, masks):
            if bits:
                acc ^= F.vscale(b, self.mul_binary_packed(u, bits), self.n2)
        return acc

    # ---------------------------------------------------------------- API

    def _check(self, *vs):
        for v in vs:
            if len(v) != self.n2:
                raise ShapeMismatch(f"ring elements have length {self.n2}")

    def mul(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        self._check(u, v)
        F = self.F
        return F.unpack(self.mul_packed(F.pack(u), v), self.n2)

    def x_power(self, i: int) -> list[int]:
        """Coefficients of X^i mod P (entries 0/1)."""
        r = self.reduce_packed(1 << (i * self.F.slot))
        return self.F.unpack(r, self.n2)

    def ideal_matrix(self, v: Sequence[int]) -> list[list[int]]:
        """Row i = X^i v(X) mod P."""
        self._check(v)
        F = self.F
        x = F.pack(v)
        rows = []
        for _ in range(self.n2):
            rows.append(F.unpack(x, self.n2))
            x = self.reduce_packed(x << F.slot)
        return rows


def lowrank_masks(L: LowRank, col: int) -> list[int]:
    """Per-basis-vector bit masks of column `col` of a low-rank matrix."""
    masks = [0] * len(L.basis)
    for i, row in enumerate(L.coords):
        c = row[col]
        t = 0
        while c:
            if c & 1:
                masks[t] |= 1 << i
            c >>= 1
            t += 1
    return masks


def vec_dot_matrix(R: IdealRing, v: Sequence[int], M: Sequence[Sequence[int]]) -> list[list[int]]:
    """Column j of the result = v * (column j of M) mod P; M is n2 x n1."""
    if len(M) != R.n2:
        raise ShapeMismatch("matrix must have n2 rows")
    n1 = len(M[0])
    F = R.F
    vp = F.pack(v)
    cols = [F.unpack(R.mul_packed(vp, [row[j] for row in M]), R.n2) for j in range(n1)]
    return [[cols[j][i] for j in range(n1)] for i in range(R.n2)]


def mat_vec_left(u: Sequence[int], M: Sequence[Sequence[int]], F: GF2m) -> list[int]:
    """Row vector u times matrix M over GF(2^m)."""
    n = len(M[0])
    acc = 0
    for a, row in zip(u, M):
        if a:
            acc ^= F.vscale(a, F.pack(row), n)
    return F.unpack(acc, n)


def fold(v: Sequence[int], n1: int, n2: int) -> list[list[int]]:
    """Length n1*n2 vector -> n2 x n1 matrix, column j = v[j*n2:(j+1)*n2]."""
    if len(v) != n1 * n2:
        raise ShapeMismatch("fold needs a vector of length n1*n2")
    return [[v[j * n2 + i] for j in range(n1)] for i in range(n2)]


def unfold(M: Sequence[Sequence[int]]) -> list[int]:
    n2 = len(M)
    n1 = len(M[0]) if n2 else 0
    return [M[i][j] for j in range(n1) for i in range(n2)]
