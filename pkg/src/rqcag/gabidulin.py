"""Gabidulin and augmented Gabidulin codes.

An augmented code evaluates q-polynomials of q-degree < k at n' independent
points and pads the result with n - n' zeros. Whatever an error puts in the
padding is a free look at part of the error support ("support erasures");
the decoder turns it into extra decoding radius.

Decoding (y = c + e):
  1. E2 = span of the padded coordinates of y, d = dim E2, V2 = annihilator(E2).
  2. Find a monic W of q-degree delta - d and R of q-degree < k + delta with
     W(V2(y_i)) = R(g_i) for every i < n'. R is obtained by Newton
     interpolation through the first k + delta points; the remaining points
     give a small linear system for the coefficients of W.
  3. V = W o V2, P = left quotient of R by V, then check the residual weight.

The interpolation tables only depend on the evaluation points, so they are
built once per code and reused.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .f2linalg import batch_rank_f2, echelon, rank_of, rank_weight
from .field import GF2m
from .qpoly import QPoly, compose, evaluate_many, left_divide


class DecodeFailure(Enum):
    ERASURE_RANK_TOO_LOW = "ErasureRankTooLow"
    SYSTEM_INCONSISTENT = "SystemInconsistent"
    RESIDUAL_WEIGHT_TOO_HIGH = "ResidualWeightTooHigh"


@dataclass
class DecodeOutcome:
    message: list[int] | None = None
    failure: DecodeFailure | None = None
    error: list[int] | None = None
    erasure_dim: int = 0

    @property
    def ok(self) -> bool:
        return self.failure is None


@dataclass
class AugGabCode:
    F: GF2m
    n: int
    n_prime: int
    k: int
    g: tuple[int, ...]
    epsilon: int
    _tables: tuple | None = dc_field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.g = tuple(self.g)
        m = self.F.m
        if len(self.g) != self.n_prime:
            raise ValueError("need exactly n' evaluation points")
        if self.epsilon == 0:
            if not (self.n == self.n_prime and self.k <= self.n <= m):
                raise ValueError("classical Gabidulin needs k <= n = n' <= m")
        else:
            if not self.k <= self.n_prime < m < self.n:
                raise ValueError("augmented code needs k <= n' < m < n")
            if not 1 <= self.epsilon <= min(self.n - self.n_prime, self.n_prime - self.k):
                raise ValueError("epsilon out of range")
        if rank_of(self.g) != self.n_prime:
            raise ValueError("evaluation points are not F_2-independent")

    @classmethod
    def gabidulin(cls, F, g, k):
        return cls(F, len(g), len(g), k, tuple(g), 0)

    @property
    def capacity(self) -> int:
        return capacity(self.n_prime, self.k, self.epsilon)

    def encode(self, msg: Sequence[int]) -> list[int]:
        if len(msg) != self.k:
            raise ValueError(f"message must have {self.k} coefficients")
        return evaluate_many(QPoly(self.F, msg), self.g) + [0] * (self.n - self.n_prime)

    def generator_matrix(self) -> list[list[int]]:
        rows = []
        x = list(self.g)
        for _ in range(self.k):
            rows.append(x + [0] * (self.n - self.n_prime))
            x = [self.F.sq(a) for a in x]
        return rows

    # ------------------------------------------------------------ decoding

    def _newton_tables(self):
        """Per-step packed data of the annihilators A_j of g_0..g_{j-1}.

        Step j stores 1/A_j(g_j), A_j at the points g_j..g_{n'-1} (packed,
        earlier points are roots anyway) and the j+1 coefficients of A_j.
        """
        if self._tables is None:
            F = self.F
            S = F.slot
            K = min(self.k + self.capacity, self.n_prime)
            npts = self.n_prime
            imgs = F.pack(self.g)
            coef = 1
            piv, img_tab, coef_tab = [], [], []
            for j in range(K):
                live = npts - j
                c = imgs & F.mask
                piv.append(c)
                img_tab.append(imgs)
                coef_tab.append(coef)
                imgs = (F.vsquare(imgs, live) ^ F.vscale(c, imgs, live)) >> S
                coef = (F.vsquare(coef, j + 1) << S) ^ F.vscale(c, coef, j + 1)
            self._tables = (K, F.batch_inv(piv), img_tab, coef_tab)
        return self._tables

    def _interpolate(self, u: int) -> tuple[int, int]:
        """R of q-degree < K with R(g_i) = u_i for i < K (u packed over n').

        Returns (packed coefficients of R, packed residual u - R(g) over n').
        """
        F = self.F
        S = F.slot
        K, piv, img_tab, coef_tab = self._newton_tables()
        npts = self.n_prime
        res = u
        coef = 0
        for j in range(K):
            r = F.vget(res, j)
            if r:
                lam = F.mul(r, piv[j])
                res ^= F.vscale(lam, img_tab[j], npts - j) << (j * S)
                coef ^= F.vscale(lam, coef_tab[j], j + 1)
        return coef, res

    def decode(self, y: Sequence[int]) -> DecodeOutcome:
        F = self.F
        n, npr, k = self.n, self.n_prime, self.k
        delta = self.capacity
        if len(y) != n:
            raise ValueError(f"received word must have length {n}")

        e2 = echelon(y[npr:])
        d = len(e2)
        if d > delta:
            return DecodeOutcome(failure=DecodeFailure.RESIDUAL_WEIGHT_TOO_HIGH, erasure_dim=d)
        t = delta - d
        if npr < k + delta + t:
            return DecodeOutcome(failure=DecodeFailure.ERASURE_RANK_TOO_LOW, erasure_dim=d)

        # V2 and z_i = V2(y_i) in one pass (images of basis + points)
        pts = e2 + list(y[:npr])
        npts = len(pts)
        imgs = F.pack(pts)
        v2 = 1
        S = F.slot
        for i in range(d):
            c = F.vget(imgs, i)
            v2 = (F.vsquare(v2, d + 1) << S) ^ F.vscale(c, v2, d + 1)
            imgs = F.vsquare(imgs, npts) ^ F.vscale(c, imgs, npts)
        V2 = QPoly(F, F.unpack(v2, d + 1))
        z = imgs >> (d * S)

        K = self._newton_tables()[0]
        # right-hand sides: z^[t] and the columns z^[j], j < t
        cols = []
        zj = z
        for _ in range(t):
            cols.append(zj)
            zj = F.vsquare(zj, npr)
        r_coef, r_res = self._interpolate(zj)

        if t:
            col_out = [self._interpolate(c) for c in cols]
            nres = npr - K
            res_b = F.unpack(r_res >> (K * S), nres)
            rows = [[F.vget(cr >> (K * S), i) for _, cr in col_out] for i in range(nres)]
            w = _solve_ext(F, rows, res_b, t)
            if w is None:
                return DecodeOutcome(failure=DecodeFailure.SYSTEM_INCONSISTENT, erasure_dim=d)
            for wj, (cc, _) in zip(w, col_out):
                if wj:
                    r_coef ^= F.vscale(wj, cc, K)
            W = QPoly(F, list(w) + [1])
            V = compose(W, V2)
        else:
            if r_res >> (K * S):
                return DecodeOutcome(failure=DecodeFailure.SYSTEM_INCONSISTENT, erasure_dim=d)
            V = V2

        R = QPoly(F, F.unpack(r_coef, K))
        P, rem = left_divide(R, V)
        if not rem.is_zero() or len(P.c) > k:
            return DecodeOutcome(failure=DecodeFailure.RESIDUAL_WEIGHT_TOO_HIGH, erasure_dim=d)
        msg = P.c + [0] * (k - len(P.c))
        c = self.encode(msg)
        e = [a ^ b for a, b in zip(y, c)]
        if rank_weight(e) > delta:
            return DecodeOutcome(failure=DecodeFailure.RESIDUAL_WEIGHT_TOO_HIGH, erasure_dim=d)
        return DecodeOutcome(message=msg, error=e, erasure_dim=d)


def _solve_ext(F: GF2m, rows: list[list[int]], rhs: list[int], nvars: int):
    """One solution of rows * w = rhs over GF(2^m), free variables 0."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(nvars):
        p = next((i for i in range(r, len(aug)) if aug[i][c]), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = F.inv(aug[r][c])
        aug[r] = [F.mul(inv, x) for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x ^ F.mul(f, y) for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] for row in aug[r:]):
        return None
    w = [0] * nvars
    for i, c in enumerate(pivots):
        w[c] = aug[i][-1]
    return w


# ---------------------------------------------------------------- the model

def capacity(n_prime: int, k: int, epsilon: int) -> int:
    return (n_prime - k + epsilon) // 2


def rank_count(q: int, rows: int, cols: int, i: int) -> int:
    """Number of rows x cols matrices over F_q of rank exactly i."""
    num = 1
    den = 1
    for j in range(i):
        num *= (q ** rows - q ** j) * (q ** cols - q ** j)
        den *= q ** i - q ** j
    return num // den


def log2_int(x: int) -> float:
    if x <= 0:
        return -math.inf
    b = x.bit_length()
    if b <= 53:
        return math.log2(x)
    return b - 53 + math.log2(x >> (b - 53))


def log2_fraction(x: Fraction) -> float:
    return log2_int(x.numerator) - log2_int(x.denominator)


def dfr_probability(delta: int, n_minus_nprime: int, epsilon: int, q: int = 2) -> Fraction:
    """P[rank of a uniform delta x (n-n') matrix over F_q < epsilon], exactly."""
    if epsilon <= 0:
        return Fraction(0)
    total = q ** (delta * n_minus_nprime)
    good = sum(rank_count(q, delta, n_minus_nprime, i)
               for i in range(epsilon, min(delta, n_minus_nprime) + 1))
    return Fraction(total - good, total)


def dfr_bits(delta: int, n_minus_nprime: int, epsilon: int, q: int = 2) -> float:
    """log2 of the failure probability; -inf when failure is impossible."""
    return log2_fraction(dfr_probability(delta, n_minus_nprime, epsilon, q)) \
        if epsilon > 0 else -math.inf


def dfr_monte_carlo(rng, delta: int, n_minus_nprime: int, epsilon: int, trials: int,
                    chunk: int = 200_000) -> float:
    """Fraction of uniform delta x (n-n') bit matrices with rank < epsilon."""
    if epsilon <= 0:
        return 0.0
    rows, cols = delta, n_minus_nprime
    if cols > 64:
        rows, cols = cols, rows
    if cols > 64:
        fails = sum(rank_of(rng.getrandbits(cols) for _ in range(rows)) < epsilon
                    for _ in range(trials))
        return fails / trials
    gen = np.random.default_rng(rng.getrandbits(64))
    mask = np.uint64((1 << cols) - 1)
    fails = 0
    done = 0
    while done < trials:
        t = min(chunk, trials - done)
        mats = gen.integers(0, np.iinfo(np.uint64).max, size=(t, rows),
                            dtype=np.uint64, endpoint=True) & mask
        fails += int((batch_rank_f2(mats, cols) < epsilon).sum())
        done += t
    return fails / trials
