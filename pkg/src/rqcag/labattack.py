"""Toy-size executable attacks used to check the estimator's probabilities.

Both attacks guess a subspace, turn the syndrome equations into a linear
system over F_2 and keep a solution only after checking it against the
instance, so a reported success is never a false positive.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .estimator import qbinomial, rsl_polynomial_threshold
from .f2linalg import (Subspace, batch_rank_f2, column_solve, rank_of,
                       rank_weight, sample_basis, sample_full_weight, sample_nh_triple, support)
from .field import GF2m, field


class Exhausted(RuntimeError):
    pass


def _flat(v: Sequence[int], m: int) -> int:
    """Bits of a vector over GF(2^m), coordinate i in bits i*m..i*m+m-1."""
    x = 0
    for i, a in enumerate(v):
        x |= a << (i * m)
    return x


def _col(H, j):
    return [row[j] for row in H]


def _hmul(F: GF2m, H, e: Sequence[int]) -> list[int]:
    out = []
    for row in H:
        acc = 0
        for h, x in zip(row, e):
            if h and x:
                acc ^= F.mul(h, x)
        out.append(acc)
    return out


def _random_parity_check(rng, F: GF2m, rows: int, cols: int) -> list[list[int]]:
    """[I | R] with R uniform, so the matrix has full rank."""
    return [[int(i == j) for j in range(rows)] + [F.random(rng) for _ in range(cols - rows)]
            for i in range(rows)]


def _combine(basis: Sequence[int], c: int) -> int:
    x = 0
    t = 0
    while c:
        if c & 1:
            x ^= basis[t]
        c >>= 1
        t += 1
    return x


def solve_with_support(F: GF2m, H, s: Sequence[int], basis: Sequence[int]) -> list[int] | None:
    """An e with H e^T = s and every entry in span(basis), or None."""
    n = len(H[0])
    m = F.m
    w = len(basis)
    cols = [_flat([F.mul(h, b) for h in _col(H, j)], m) for j in range(n) for b in basis]
    x, _ = column_solve(cols, _flat(s, m))
    if x is None:
        return None
    mask = (1 << w) - 1
    return [_combine(basis, (x >> (j * w)) & mask) for j in range(n)]


# ---------------------------------------------------------------------- RSL

@dataclass
class RSLInstance:
    m: int
    n: int
    k: int
    r: int
    N: int
    H: list[list[int]]
    syndromes: list[list[int]]
    hidden: Subspace
    errors: list[list[int]] = dc_field(repr=False, default_factory=list)

    @property
    def F(self) -> GF2m:
        return field(self.m)


def gen_rsl_instance(rng, m: int, n: int, k: int, r: int, N: int) -> RSLInstance:
    if r > min(m, n):
        raise ValueError("need r <= min(m, n)")
    F = field(m)
    H = _random_parity_check(rng, F, n - k, n)
    basis = sample_basis(rng, r, m)
    errors = [sample_full_weight(rng, basis, 1, n).matrix()[0] for _ in range(N)]
    return RSLInstance(m, n, k, r, N, H, [_hmul(F, H, e) for e in errors],
                       Subspace.span(m, basis), errors)


def rsl_shift(N: int, r: int) -> int:
    """Number a of leading coordinates a nonzero combination is forced to cancel.

    N binary unknowns against a*r equations need N > a*r for a nonzero
    solution to exist, hence (N - 1) // r rather than N // r.
    """
    return (N - 1) // r


def rsl_default_r1(m: int, n: int, k: int, N: int, r: int) -> int:
    a = rsl_shift(N, r)
    return max(r, min(m, (m * (n - k) - N) // (n - a)))


def rsl_guess_probability(m: int, r: int, r1: int) -> Fraction:
    """P(fixed r-dim subspace lies in a random r1-dim subspace of F_2^m)."""
    return Fraction(qbinomial(m - r, r1 - r), qbinomial(m, r1))


@dataclass
class RSLTry:
    success: bool
    kernel_dim: int
    guess_holds: bool  # the hidden support lies in the guessed space


@dataclass
class RSLResult:
    support: Subspace
    errors: list[list[int]]
    tries: int


def _fields(vectors: Sequence[int], offset: int, width: int, count: int) -> np.ndarray:
    """(len(vectors), count) array of consecutive width-bit fields."""
    mask = (1 << width) - 1
    return np.array([[(v >> (offset + i * width)) & mask for i in range(count)] for v in vectors],
                    dtype=np.uint64).reshape(len(vectors), count)


def _span_all(vals: np.ndarray) -> np.ndarray:
    """Every XOR combination of the rows of vals (2^rows of them)."""
    out = np.zeros((1, vals.shape[1]), dtype=np.uint64)
    for row in vals:
        out = np.concatenate([out, out ^ row[None, :]])
    return out


def rsl_try(inst: RSLInstance, r1: int, rng, max_kernel: int = 18):
    """One guess. Returns (RSLTry, recovered support or None, errors or None)."""
    F = inst.F
    m, n, N, r = inst.m, inst.n, inst.N, inst.r
    a = rsl_shift(N, r)
    vb = sample_basis(rng, r1, m)
    cols = [_flat(s, m) for s in inst.syndromes]
    for j in range(a, n):
        hj = _col(inst.H, j)
        cols += [_flat([F.mul(h, v) for h in hj], m) for v in vb]
    _, ker = column_solve(cols)
    holds = all(x in Subspace.span(m, vb) for x in inst.hidden.basis)
    fail = RSLTry(False, len(ker), holds), None, None
    if not ker or len(ker) > max_kernel:
        return fail
    lam_w = min(N, 63)
    nlam = -(-N // lam_w)
    lam = _span_all(_fields(ker, 0, lam_w, nlam))
    ent = _span_all(_fields(ker, N, r1, n - a))
    ok = lam.any(axis=1) & (batch_rank_f2(ent, r1) <= r) & ent.any(axis=1)
    if not ok.any():
        return fail
    coords = {int(c) for c in np.unique(ent[ok])}
    rec = Subspace.span(m, (_combine(vb, c) for c in coords))
    if rec.dim != r:
        return fail
    errors = []
    for s in inst.syndromes:
        e = solve_with_support(F, inst.H, s, rec.basis)
        if e is None or rank_weight(e) > r:
            return fail
        errors.append(e)
    return RSLTry(True, len(ker), holds), rec, errors


def rsl_combinatorial_attack(inst: RSLInstance, r1: int | None = None, max_tries: int | None = None,
                             rng=None) -> RSLResult:
    """Guess r1-dim spaces until one reveals the shared error support."""
    import random
    rng = rng or random.Random(0)
    if r1 is None:
        r1 = rsl_default_r1(inst.m, inst.n, inst.k, inst.N, inst.r)
    if not inst.r <= r1 <= inst.m:
        raise ValueError("need r <= r1 <= m")
    if max_tries is None:
        p = rsl_guess_probability(inst.m, inst.r, r1)
        max_tries = min(10 ** 7, int(16 / p) + 1)
    for t in range(1, max_tries + 1):
        res, rec, errors = rsl_try(inst, r1, rng)
        if res.success:
            return RSLResult(rec, errors, t)
    raise Exhausted(f"no support found in {max_tries} tries")


@dataclass
class PolyDemo:
    threshold: int
    above: list[tuple[int, int, bool]]   # (N, tries, success)
    below: list[tuple[int, int, bool]]
    r1_below: int
    predicted_below: float

    def success_rate_above(self) -> float:
        return sum(s for _, _, s in self.above) / len(self.above)

    def per_try_below(self) -> float:
        return sum(s for _, _, s in self.below) / len(self.below)

    def transcript(self) -> str:
        lines = [f"# threshold {self.threshold}"]
        lines += [f"above N={N} tries={t} success={int(s)}" for N, t, s in self.above]
        lines += [f"below N={N} tries={t} success={int(s)}" for N, t, s in self.below]
        return "\n".join(lines) + "\n"


def rsl_polynomial_regime_demo(rng, m: int, n: int, k: int, r: int, reps: int = 100,
                               tries: int = 5, N_above: int | None = None,
                               N_below: int | None = None, below_tries: int = 200) -> PolyDemo:
    """Run the attack just above the polynomial threshold and well below it.

    Above: r1 = m, the guess always holds, success within `tries`.
    Below: single tries with r1 from the cost formula; their success rate
    should follow the guessing probability.
    """
    thr = rsl_polynomial_threshold(m, n, k, r)
    N_above = N_above or thr + 1
    N_below = N_below or max(r + 1, (thr + 1) // 2)
    above = []
    for _ in range(reps):
        inst = gen_rsl_instance(rng, m, n, k, r, N_above)
        try:
            res = rsl_combinatorial_attack(inst, m, tries, rng)
            above.append((N_above, res.tries, True))
        except Exhausted:
            above.append((N_above, tries, False))
    r1 = rsl_default_r1(m, n, k, N_below, r)
    below = []
    for _ in range(below_tries):
        inst = gen_rsl_instance(rng, m, n, k, r, N_below)
        res, _, _ = rsl_try(inst, r1, rng)
        below.append((N_below, 1, res.success))
    return PolyDemo(thr, above, below, r1, float(rsl_guess_probability(m, r, r1)))


# -------------------------------------------------------------------- NHRSD

@dataclass
class NHRSDInstance:
    m: int
    n: int
    n1: int
    w1: int
    w2: int
    H: list[list[int]]         # (n + n1) x (2n + n1)
    s: list[int]
    e: list[int] = dc_field(repr=False, default_factory=list)   # (e1, e2, e3)

    @property
    def F(self) -> GF2m:
        return field(self.m)

    def split(self, e):
        n, n1 = self.n, self.n1
        return e[:n], e[n:n + n1], e[n + n1:]


def gen_nhrsd_instance(rng, m: int, n: int, n1: int, w1: int, w2: int) -> NHRSDInstance:
    F = field(m)
    H = _random_parity_check(rng, F, n + n1, 2 * n + n1)
    x1, x2, x3 = sample_nh_triple(rng, m, w1, w2, [(1, n), (1, n1), (1, n)])
    e = x1.matrix()[0] + x2.matrix()[0] + x3.matrix()[0]
    return NHRSDInstance(m, n, n1, w1, w2, H, _hmul(F, H, e), e)


def nhrsd_unique(m: int, n: int, n1: int, r: int, rho: int) -> bool:
    """The guessed system has no more unknowns than the equations left over."""
    return 2 * n * r <= m * (n + n1 - 1) - n1 * (r + rho)


@dataclass
class NHRSDTry:
    success: bool
    guess_holds: bool
    error: list[int] | None = None


def nhrsd_try(inst: NHRSDInstance, r: int, rho: int, rng) -> NHRSDTry:
    F = inst.F
    m, n, n1 = inst.m, inst.n, inst.n1
    vb = sample_basis(rng, r, m)
    wb = sample_basis(rng, r + rho, m, vb)   # V + Z with Z a complement
    e1, e2, e3 = inst.split(inst.e)
    holds = (support(e1 + e3, m).issubspace(Subspace.span(m, vb))
             and support(e2, m).issubspace(Subspace.span(m, wb)))
    cols, layout = [], []
    for j in range(2 * n + n1):
        basis = wb if n <= j < n + n1 else vb
        hj = _col(inst.H, j)
        cols += [_flat([F.mul(h, b) for h in hj], m) for b in basis]
        layout.append(basis)
    x, _ = column_solve(cols, _flat(inst.s, m))
    if x is None:
        return NHRSDTry(False, holds)
    e, off = [], 0
    for basis in layout:
        e.append(_combine(basis, (x >> off) & ((1 << len(basis)) - 1)))
        off += len(basis)
    a, b, c = inst.split(e)
    ok = (rank_weight(a + c) <= inst.w1 and rank_weight(b) <= inst.w1 + inst.w2
          and _hmul(F, inst.H, e) == inst.s)
    return NHRSDTry(ok, holds, e if ok else None)


def nhrsd_guess_and_solve(inst: NHRSDInstance, r: int, rho: int, max_tries: int | None = None,
                          rng=None) -> tuple[list[int], int]:
    """Guess (V, Z) until the linear system yields a valid error; returns (e, tries)."""
    import random
    from .estimator import nhrsd_success_probability
    rng = rng or random.Random(0)
    if not (inst.w1 <= r and inst.w2 <= rho and r + rho <= inst.m):
        raise ValueError("need w1 <= r, w2 <= rho, r + rho <= m")
    if max_tries is None:
        p = nhrsd_success_probability(2, inst.m, inst.w1, inst.w2, r, rho).pi
        max_tries = min(10 ** 7, int(16 / p) + 1)
    for t in range(1, max_tries + 1):
        res = nhrsd_try(inst, r, rho, rng)
        if res.success:
            return res.error, t
    raise Exhausted(f"no error found in {max_tries} tries")


def sample_guess_event(rng, m: int, w1: int, w2: int, r: int, rho: int) -> bool:
    """One draw of (S1 in V and S2 in V + Z) for random S1 in S2 and V, Z."""
    s1 = sample_basis(rng, w1, m)
    s2 = sample_basis(rng, w1 + w2, m, s1)
    vb = sample_basis(rng, r, m)
    wb = sample_basis(rng, r + rho, m, vb)
    return rank_of(vb + s1) == r and rank_of(wb + s2) == r + rho
