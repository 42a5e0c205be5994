"""Linear algebra over F_2 and the rank-metric basics built on it.

Bit vectors are Python ints. A vector over GF(2^m) is a list of ints and a
matrix over GF(2^m) is a list of rows; its F_2 view (`expand`) is the m x n
bit matrix whose column j holds the bits of coordinate j.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dfield
from typing import Iterable, Sequence

import numpy as np


class Inconsistent(ValueError):
    pass


class ShapeTooSmall(ValueError):
    pass


@dataclass
class BitMatrix:
    rows: int
    cols: int
    data: list[int] = dfield(default_factory=list)  # data[i] bit j = entry (i, j)

    def __post_init__(self):
        if not self.data:
            self.data = [0] * self.rows
        if len(self.data) != self.rows:
            raise ValueError("row count does not match data")
        lim = 1 << self.cols
        if any(r >= lim or r < 0 for r in self.data):
            raise ValueError("row wider than cols")

    def __getitem__(self, ij):
        i, j = ij
        return (self.data[i] >> j) & 1

    @classmethod
    def identity(cls, k: int) -> "BitMatrix":
        return cls(k, k, [1 << i for i in range(k)])

    def transpose(self) -> "BitMatrix":
        out = [0] * self.cols
        for i, r in enumerate(self.data):
            j = 0
            while r:
                if r & 1:
                    out[j] |= 1 << i
                r >>= 1
                j += 1
        return BitMatrix(self.cols, self.rows, out)

    def mul_vec(self, x: int) -> int:
        """M x, x and result as bit ints."""
        y = 0
        for i, r in enumerate(self.data):
            y |= ((r & x).bit_count() & 1) << i
        return y


# ------------------------------------------------------------- elimination

def echelon(vectors: Iterable[int]) -> list[int]:
    """Reduced row echelon basis of the span, sorted by decreasing pivot.

    Pivot of a row = its highest set bit; every pivot bit is cleared in all
    other rows, so the result is a canonical representative of the span.
    """
    piv: dict[int, int] = {}
    for v in vectors:
        for p in sorted(piv, reverse=True):
            if (v >> p) & 1:
                v ^= piv[p]
        if v:
            p = v.bit_length() - 1
            for q in piv:
                if (piv[q] >> p) & 1:
                    piv[q] ^= v
            piv[p] = v
    return [piv[p] for p in sorted(piv, reverse=True)]


def rank_of(vectors: Iterable[int]) -> int:
    """Rank of a list of bit vectors (no canonical form, just the count)."""
    piv: dict[int, int] = {}
    for v in vectors:
        while v:
            t = v.bit_length() - 1
            p = piv.get(t)
            if p is None:
                piv[t] = v
                break
            v ^= p
    return len(piv)


def rank_f2(M: BitMatrix) -> int:
    return rank_of(M.data)


def gauss_solve(rows: Sequence[int], nvars: int) -> tuple[int, list[int]]:
    """Solve an augmented system; bit nvars of each row is its right-hand side.

    Returns one solution (free variables set to 0) and a kernel basis.
    Raises Inconsistent when the system has no solution.
    """
    rhs_bit = 1 << nvars
    full = (1 << nvars) - 1
    piv: dict[int, int] = {}  # pivot column (lowest set var bit) -> row
    for r in rows:
        for p, pr in piv.items():
            if (r >> p) & 1:
                r ^= pr
        if not r & full:
            if r & rhs_bit:
                raise Inconsistent("no solution")
            continue
        p = (r & -r).bit_length() - 1
        for q in piv:
            if (piv[q] >> p) & 1:
                piv[q] ^= r
        piv[p] = r
    sol = 0
    for p, r in piv.items():
        if r & rhs_bit:
            sol |= 1 << p
    free = [j for j in range(nvars) if j not in piv]
    kernel = []
    for f in free:
        v = 1 << f
        for p, r in piv.items():
            if (r >> f) & 1:
                v |= 1 << p
        kernel.append(v)
    return sol, kernel


def solve(M: BitMatrix, rhs: int) -> tuple[int, int]:
    """One x with M x = rhs (bit ints) and the kernel dimension."""
    rows = [r | (((rhs >> i) & 1) << M.cols) for i, r in enumerate(M.data)]
    sol, ker = gauss_solve(rows, M.cols)
    return sol, len(ker)


def column_solve(cols: Sequence[int], rhs: int = 0) -> tuple[int | None, list[int]]:
    """Solve sum x_i cols[i] = rhs where the columns are bit ints.

    Returns (x or None when inconsistent, kernel basis); bit i of x is x_i.
    """
    piv: dict[int, tuple[int, int]] = {}
    kernel = []
    for idx, c in enumerate(cols):
        tag = 1 << idx
        while c:
            p = c.bit_length() - 1
            hit = piv.get(p)
            if hit is None:
                piv[p] = (c, tag)
                break
            c ^= hit[0]
            tag ^= hit[1]
        if not c:
            kernel.append(tag)
    x = 0
    c = rhs
    while c:
        hit = piv.get(c.bit_length() - 1)
        if hit is None:
            return None, kernel
        c ^= hit[0]
        x ^= hit[1]
    return x, kernel


def batch_rank_f2(mats: np.ndarray, cols: int) -> np.ndarray:
    """Ranks of a stack of small bit matrices.

    `mats` has shape (T, rows), dtype uint64, row bits < cols <= 64.
    """
    A = np.array(mats, dtype=np.uint64, copy=True)
    T, R = A.shape
    used = np.zeros((T, R), dtype=bool)
    rank = np.zeros(T, dtype=np.int64)
    rowidx = np.arange(R)
    one = np.uint64(1)
    for c in range(cols):
        bit = ((A >> np.uint64(c)) & one).astype(bool)
        cand = bit & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        idx = cand.argmax(axis=1)
        prow = A[np.arange(T), idx]
        hit = bit & (rowidx[None, :] != idx[:, None]) & has[:, None]
        A ^= np.where(hit, prow[:, None], np.uint64(0))
        used[np.arange(T), idx] |= has
        rank += has
    return rank


# -------------------------------------------------------- rank-metric views

def expand(v: Sequence[int], m: int) -> BitMatrix:
    """m x n bit matrix: column j = bits of v[j]."""
    data = [0] * m
    for j, x in enumerate(v):
        i = 0
        while x:
            if x & 1:
                data[i] |= 1 << j
            x >>= 1
            i += 1
    return BitMatrix(m, len(v), data)


def recompose(M: BitMatrix) -> list[int]:
    return M.transpose().data


def _entries(v) -> Iterable[int]:
    for x in v:
        if isinstance(x, (list, tuple)):
            yield from x
        else:
            yield x


def rank_weight(v) -> int:
    """Rank weight of a vector, or of a matrix (dimension of the entry span)."""
    return rank_of(_entries(v))


@dataclass(frozen=True)
class Subspace:
    """F_2-subspace of GF(2^m) held by its reduced echelon basis."""
    m: int
    basis: tuple[int, ...]

    @classmethod
    def span(cls, m: int, vectors: Iterable[int]) -> "Subspace":
        return cls(m, tuple(echelon(vectors)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, x: int) -> int:
        for b in self.basis:
            if (x >> (b.bit_length() - 1)) & 1:
                x ^= b
        return x

    def __contains__(self, x: int) -> bool:
        return self.reduce(x) == 0

    def issubspace(self, other: "Subspace") -> bool:
        return all(b in other for b in self.basis)

    def elements(self) -> list[int]:
        out = [0]
        for b in self.basis:
            out += [x ^ b for x in out]
        return out


def support(v, m: int) -> Subspace:
    return Subspace.span(m, _entries(v))


# ------------------------------------------------------------------ sampling

@dataclass
class LowRank:
    """Matrix over GF(2^m) stored as basis + per-entry coordinate masks.

    Entry (i, j) = XOR of basis[t] over the set bits t of coords[i][j].
    """
    basis: tuple[int, ...]
    coords: list[list[int]]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.coords), len(self.coords[0]) if self.coords else 0

    def entry(self, c: int) -> int:
        x = 0
        t = 0
        while c:
            if c & 1:
                x ^= self.basis[t]
            c >>= 1
            t += 1
        return x

    def matrix(self) -> list[list[int]]:
        return [[self.entry(c) for c in row] for row in self.coords]

    def column(self, j: int) -> list[int]:
        return [self.entry(row[j]) for row in self.coords]

    def layer(self, t: int) -> list[list[int]]:
        """Binary matrix of coordinate t."""
        return [[(c >> t) & 1 for c in row] for row in self.coords]

    def hstack(self, *others: "LowRank") -> "LowRank":
        assert all(o.basis == self.basis for o in others)
        rows = [list(r) for r in self.coords]
        for o in others:
            for i, r in enumerate(o.coords):
                rows[i].extend(r)
        return LowRank(self.basis, rows)


def sample_subspace(rng, dim: int, m: int, must_contain_one: bool = False) -> Subspace:
    """Uniform random subspace of GF(2^m) (uniform among those holding 1 if asked)."""
    if dim > m:
        raise ValueError("dimension exceeds ambient dimension")
    return Subspace.span(m, sample_basis(rng, dim, m, [1] if must_contain_one and dim else []))


def sample_basis(rng, dim: int, m: int, start: Sequence[int] = ()) -> list[int]:
    """Independent vectors: `start` completed by uniform draws to `dim` vectors."""
    basis = list(start)
    while len(basis) < dim:
        v = rng.getrandbits(m)
        if rank_of(basis + [v]) == len(basis) + 1:
            basis.append(v)
    return basis


def _full_weight_coords(rng, w: int, shapes: Sequence[tuple[int, int]]) -> list[list[list[int]]]:
    total = sum(r * c for r, c in shapes)
    if total < w:
        raise ShapeTooSmall(f"{total} entries cannot span dimension {w}")
    while True:
        blocks = [[[rng.getrandbits(w) for _ in range(c)] for _ in range(r)] for r, c in shapes]
        flat = (x for b in blocks for row in b for x in row)
        if rank_of(flat) == w:
            return blocks


def sample_full_weight(rng, basis: Sequence[int], rows: int, cols: int) -> LowRank:
    """Entries uniform in span(basis), resampled until they span all of it."""
    (coords,) = _full_weight_coords(rng, len(basis), [(rows, cols)])
    return LowRank(tuple(basis), coords)


def sample_full_weight_blocks(rng, basis: Sequence[int], shapes) -> list[LowRank]:
    """Several matrices whose joint support is exactly span(basis)."""
    blocks = _full_weight_coords(rng, len(basis), shapes)
    return [LowRank(tuple(basis), b) for b in blocks]


def sample_nh_triple(rng, m: int, w1: int, w2: int, shapes, must_contain_one=False):
    """(X1, X2, X3) with supp(X1, X3) = V of dim w1, supp(X2) = W of dim w1+w2, V in W.

    Everything is expressed over one basis of W whose first w1 vectors span V,
    so X1 and X3 only use the low w1 coordinate bits.
    """
    if w1 + w2 > m:
        raise ValueError("w1 + w2 exceeds m")
    s1, s2, s3 = shapes
    vb = sample_basis(rng, w1, m, [1] if must_contain_one else [])
    wb = sample_basis(rng, w1 + w2, m, vb)
    x1, x3 = _full_weight_coords(rng, w1, [s1, s3])
    (x2,) = _full_weight_coords(rng, w1 + w2, [s2])
    b = tuple(wb)
    return LowRank(b, x1), LowRank(b, x2), LowRank(b, x3)
