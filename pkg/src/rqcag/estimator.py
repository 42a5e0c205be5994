"""Attack-cost formulas for rank syndrome decoding and rank support learning.

Every count is an exact integer; logarithms are taken only when a cost is
reported. Bits are log2 of the number of F_2 operations, polynomial factors
omitted unless `pessimism` is asked for. The small integer programs are
solved by scanning the whole grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .gabidulin import log2_int

OMEGA = 2.81


class Infeasible(ValueError):
    pass


class OutOfRegime(ValueError):
    pass


class Degenerate(ValueError):
    pass


@dataclass
class CostReport:
    attack: str
    instance: dict
    params: dict = field(default_factory=dict)
    bits: float = 0.0
    polynomial: bool = False  # the exponent was clamped at 0
    polynomial_factor_included: bool = False

    def to_text(self) -> str:
        inst = " ".join(f"{k}={v}" for k, v in self.instance.items())
        par = " ".join(f"{k}={v}" for k, v in self.params.items())
        return (f"attack={self.attack} {inst} | {par} | bits={self.bits:.2f}"
                f" polynomial={int(self.polynomial)}"
                f" poly_factor={int(self.polynomial_factor_included)}")

    def csv_row(self) -> list:
        return [self.attack, self.instance, self.params, f"{self.bits:.4f}", int(self.polynomial)]


def _clamp(bits: float, rep: CostReport) -> CostReport:
    if bits < 0:
        rep.polynomial = True
        bits = 0.0
    rep.bits = bits
    return rep


def _pessimism(rep: CostReport, width: int | None) -> CostReport:
    if width:
        rep.bits += 3 * math.log2(width)
        rep.polynomial_factor_included = True
    return rep


# ----------------------------------------------------------------- counting

def binomial(a: int, b: int) -> int:
    return math.comb(a, b) if 0 <= b <= a else 0


@lru_cache(maxsize=None)
def qbinomial(a: int, b: int, q: int = 2) -> int:
    """Number of b-dimensional subspaces of F_q^a."""
    if b < 0 or b > a:
        return 0
    num = den = 1
    for i in range(b):
        num *= q ** (a - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def ball_size(q: int, m: int, n: int, t: int) -> int:
    """Vectors of F_{q^m}^n with rank weight <= t."""
    total = 0
    for j in range(t + 1):
        p = 1
        for l in range(j):
            p *= q ** n - q ** l
        total += p * qbinomial(m, j, q)
    return total


def rgv(q: int, m: int, n: int, k: int) -> int:
    """Rank Gilbert-Varshamov radius of an [n, k] code over F_{q^m}."""
    if not k < n:
        raise ValueError("need k < n")
    target = q ** (m * (n - k))
    t = 0
    while ball_size(q, m, n, t) < target:
        t += 1
    return t


# ---------------------------------------------------------------------- RSD

def rsd_combinatorial_bits(m: int, n: int, k: int, w: int, pessimism: bool = False) -> CostReport:
    x = (k + 1) * m
    e1 = (w - 1) * (x // n)
    e2 = w * (-(-x // n)) - m
    rep = CostReport("rsd-comb", dict(m=m, n=n, k=k, w=w), dict(branch=1 if e1 <= e2 else 2))
    _clamp(min(e1, e2), rep)
    return _pessimism(rep, (n - k) * m if pessimism else None)


def rsd_maxminors_bits(m: int, n: int, k: int, w: int, omega: float = OMEGA) -> CostReport:
    if w > n - k - 1:
        raise Infeasible("need w <= n - k - 1")
    eqs = m * binomial(n - k - 1, w)
    for a in range(n - w + 1):
        unk = binomial(n - a, w)
        if eqs >= unk - 1:
            bits = a * w + log2_int(eqs) + (omega - 1) * log2_int(max(unk, 1))
            return CostReport("rsd-mm", dict(m=m, n=n, k=k, w=w, omega=omega), dict(a=a), bits)
    raise Infeasible("no a makes the system overdetermined")


# -------------------------------------------------------------------- NHRSD

def nhrsd_combinatorial_bits(m: int, n: int, n1: int, w1: int, w2: int,
                             pessimism: bool = False) -> CostReport:
    if w1 > m or w1 + w2 > m:
        raise ValueError("weights exceed m")
    best = None
    for r in range(w1, m):
        for rho in range(w2, m - r):
            if (2 * n + n1) * r + n1 * rho <= m * (n + n1 - 1):
                v = (w1 + w2) * r + w2 * rho
                if best is None or v > best[0]:
                    best = (v, r, rho)
    if best is None:
        raise Infeasible("empty (r, rho) grid")
    _, r, rho = best
    rep = CostReport("nhrsd-comb", dict(m=m, n=n, n1=n1, w1=w1, w2=w2), dict(r=r, rho=rho))
    _clamp((w1 + w2) * (m - r) - w2 * rho - m, rep)
    return _pessimism(rep, m * (n + n1 - 1) if pessimism else None)


def nhrsd_maxminors_bits(m: int, n: int, n1: int, w1: int, w2: int,
                         omega: float = OMEGA) -> CostReport:
    W = w1 + w2

    def M(a):
        return sum(binomial(n1, i) * binomial(2 * n - a, W - i) for i in range(w2))

    total = binomial(2 * n + n1, W)
    nf = m * sum(binomial(n1 - 1, i) * binomial(n, W - i) for i in range(w2, W + 1))
    if nf > total - M(0):
        nf = total - M(0) - 1
    nu = m * binomial(n1 - 1, w2 - 1) * binomial(n - 1, w1)
    nu = min(nu, binomial(n1 - 1, w2 - 1) * binomial(2 * n, w1))
    inst = dict(m=m, n=n, n1=n1, w1=w1, w2=w2, omega=omega)
    for a in range(2 * n + 1):
        x = binomial(2 * n + n1 - a, W) - M(a) - nu
        if nf >= x - 1:
            bits = a * w1 + log2_int(nf) + (omega - 1) * log2_int(max(x, 1))
            return CostReport("nhrsd-mm", inst, dict(a=a, N=nf, nu=nu), bits)
    raise Infeasible("no a makes the system solvable")


# ---------------------------------------------------------------------- RSL

def rsl_combinatorial_bits(m: int, n: int, k: int, r: int, N: int,
                           pessimism: bool = False) -> CostReport:
    if N < 1:
        raise ValueError("need N >= 1")
    a = N // r
    if a >= n:
        raise Degenerate("a = N // r reaches n")
    r1 = max(0, min(m, (m * (n - k) - N) // (n - a)))
    rep = CostReport("rsl-comb", dict(m=m, n=n, k=k, r=r, N=N), dict(a=a, r1=r1))
    _clamp(r * (m - r1), rep)
    return _pessimism(rep, m * (n - k) if pessimism else None)


def rsl_polynomial_threshold(m: int, n: int, k: int, r: int) -> int:
    """Smallest N with N > k r m / (m - r)."""
    if not r < m:
        raise ValueError("need r < m")
    return math.floor(Fraction(k * r * m, m - r)) + 1


@lru_cache(maxsize=None)
def _nb_table(n: int, k: int, r: int, L: int, bmax: int) -> tuple[int, ...]:
    """Cumulative equation counts N_{<=b} for b = 0..bmax."""
    out = [0]
    acc = 0
    for i in range(1, bmax + 1):
        for d in range(1, i + 1):
            for j in range(1, n - k + 1):
                acc += binomial(j - 1, d - 1) * binomial(n - k - j, r - d + 1) * binomial(L - j, i - d)
        out.append(acc)
    return tuple(out)


def _alg_case(m, n, k, r, a, Np, omega, nb_full_nprime):
    """Per branch, the best (bits, b, alpha_R, alpha_lambda) for one (a, N') and rank r."""
    best: dict[str, tuple] = {}
    bmax = r + 1
    # one more alpha_R costs r bits and shrinks log2 M by at most log2(r + 1),
    # so once feasible, going further cannot help when 2 log2(r + 1) <= r
    monotone = 2 * math.log2(r + 1) <= r
    full = _nb_table(n, k, r, Np, bmax) if nb_full_nprime else None
    for al in range(Np):
        L = Np - al
        nbs = full or _nb_table(n, k, r, L, bmax)
        wied = log2_int(L * binomial(k - a + 1 + r, r))
        sum_l = 0
        for b in range(1, bmax + 1):
            sum_l += binomial(L, b)
            if not al < Np - b:
                break
            nb = nbs[b]
            for aR in range(n - a - r):
                Mb = binomial(n - a - aR, r) * sum_l
                if Mb == 0 or m * nb < Mb - 1:
                    continue
                base = r * aR + al
                lm = log2_int(Mb)
                cands = [("wiedemann", base + wied + 2 * lm)]
                if nb:
                    cands.append(("strassen", base + log2_int(m * nb) + (omega - 1) * lm))
                for branch, bits in cands:
                    if branch not in best or bits < best[branch][0]:
                        best[branch] = (bits, b, aR, al)
                if monotone:
                    break
    return best


def rsl_algebraic_cases(m: int, n: int, k: int, r: int, N: int, omega: float = OMEGA,
                        nb_full_nprime: bool = False) -> list[CostReport]:
    """Best cost of every (case, branch) pair that applies to N."""
    if N <= n - k - r:
        raise OutOfRegime("the modeling needs N > n - k - r")
    inst = dict(m=m, n=n, k=k, r=r, N=N, omega=omega)
    cases = [(0, (N - 1) // r, ((N - 1) // r) * r + 1)]
    d = 1
    while d < r and N >= d * (n - r + d):
        base = d * (n - r + d)
        if N > base:
            a = (N - base - 1) // (r - d)
            cases.append((d, a, base + a * (r - d)))
        d += 1
    out = []
    for delta, a, Np in cases:
        found = _alg_case(m, n, k, r - delta, a, Np, omega, nb_full_nprime)
        for branch in ("strassen", "wiedemann"):
            if branch not in found:
                continue
            bits, b, aR, al = found[branch]
            out.append(CostReport("rsl-alg", dict(inst), dict(
                case="delta>0" if delta else "delta=0", delta=delta, a=a, n_prime=Np, b=b,
                alpha_R=aR, alpha_lambda=al, branch=branch, wiedemann=branch == "wiedemann"),
                bits))
    return out


def rsl_algebraic_bits(m: int, n: int, k: int, r: int, N: int, omega: float = OMEGA,
                       nb_full_nprime: bool = False) -> CostReport:
    reps = rsl_algebraic_cases(m, n, k, r, N, omega, nb_full_nprime)
    if not reps:
        raise Infeasible("no feasible (b, alpha_R, alpha_lambda)")
    return min(reps, key=lambda c: c.bits)


# ------------------------------------------------------------------- NHRSL

def nhrsl_combinatorial_bits(m: int, n: int, n1: int, w1: int, w2: int, N: int,
                             swapped: bool = False, pessimism: bool = False) -> CostReport:
    """`swapped` pairs a = N1 // w1 with 2n and b = N2 // (w1 + w2) with n1."""
    best = None
    for N1 in range(N + 1):
        N2 = N - N1
        a = N1 // w1
        b = N2 // (w1 + w2)
        if (a > 2 * n or b > n1) if swapped else (a > n1 or b > 2 * n):
            continue
        cap = m * (n + n1) - N
        for r in range(w1, m):
            for rho in range(w2, m - r):
                if (n1 - b) * (r + rho) + (2 * n - a) * r <= cap:
                    v = (w1 + w2) * r + w2 * rho
                    if best is None or v > best[0]:
                        best = (v, N1, r, rho)
    if best is None:
        raise Infeasible("empty search space")
    _, N1, r, rho = best
    rep = CostReport("nhrsl-comb", dict(m=m, n=n, n1=n1, w1=w1, w2=w2, N=N, swapped=swapped),
                     dict(N1=N1, N2=N - N1, r=r, rho=rho))
    _clamp((w1 + w2) * (m - r) - w2 * rho, rep)
    return _pessimism(rep, m * (n + n1) if pessimism else None)


# ------------------------------------------------------- guessing success

@dataclass
class GuessProbability:
    contain: Fraction          # P(S1 in V)
    p: list[Fraction]          # s_l * t_l
    cond: Fraction             # sum of p
    pi: Fraction               # contain * cond
    amplified: Fraction        # (q^m - 1)/(q - 1) * pi


def nhrsd_success_probability(q: int, m: int, w1: int, w2: int, r: int, rho: int) -> GuessProbability:
    """Chance that random V (dim r) holds S1 (dim w1) and V + Z (Z of dim rho) holds S2."""
    if not (w1 <= r and w2 <= rho and r + rho <= m):
        raise ValueError("need w1 <= r, w2 <= rho, r + rho <= m")
    contain = Fraction(qbinomial(m - w1, r - w1, q), qbinomial(m, r, q))
    den = qbinomial(m - w1, r - w1, q)
    p = []
    for l in range(w2 + 1):
        if l > r - w1:  # V/S1 is too small to meet S2/S1 in l dimensions
            p.append(Fraction(0))
            continue
        s = Fraction(q ** ((r - w1 - l) * (w2 - l))
                     * qbinomial(m - w1 - w2, r - w1 - l, q) * qbinomial(w2, l, q), den)
        tden = qbinomial(m - r, w2 - l, q)
        t = Fraction(qbinomial(rho, w2 - l, q), tden) if tden else Fraction(0)
        p.append(s * t)
    cond = sum(p, Fraction(0))
    pi = contain * cond
    return GuessProbability(contain, p, cond, pi, Fraction(q ** m - 1, q - 1) * pi)


# ------------------------------------------------------------------ series

FIG3_HEADER = ["N", "attack", "bits"]


def figure3_series(m: int, n: int, k: int, r: int, omega: float = OMEGA,
                   N_range: Iterable[int] | None = None, algebraic: bool = True,
                   nb_full_nprime: bool = False) -> list[tuple[int, str, float]]:
    """Rows (N, attack, bits) for the cost-versus-N plot."""
    if N_range is None:
        N_range = range(n - k - r + 1, 301)
    ref = rsd_maxminors_bits(m, n, k, r, omega).bits
    rows = []
    for N in N_range:
        rows.append((N, "rsd-mm", ref))
        rows.append((N, "rsl-comb", rsl_combinatorial_bits(m, n, k, r, N).bits))
        if algebraic and N > n - k - r:
            best: dict[str, float] = {}
            for rep in rsl_algebraic_cases(m, n, k, r, N, omega, nb_full_nprime):
                key = f"rsl-alg/{rep.params['case']}/{rep.params['branch']}"
                best[key] = min(best.get(key, math.inf), rep.bits)
            rows.extend((N, key, bits) for key, bits in sorted(best.items()))
    return rows


# ---------------------------------------------------------- shipped sets

def design_costs(p, omega: float = OMEGA, extra_N: Iterable[int] = ()) -> list[CostReport]:
    """Every applicable estimate against the key and ciphertext of a parameter set.

    `p` needs structure, m, n, n1, n2, w, w1, w2 (a scheme.ParameterSet).
    Keys are RSD instances (ideal: length 2 n2; unstructured: n1 columns
    sharing a support, so also RSL with N = n1). Ciphertexts carry n1
    (ideal) or n2 (unstructured) syndromes under one support.
    """
    m = p.m
    out: list[CostReport] = []

    def tag(rep, what):
        rep.instance = {"target": what, **rep.instance}
        out.append(rep)

    if p.structure == "ideal":
        klen, kdim, N_ct, n_ct, n1_ct = 2 * p.n2, p.n2, p.n1, p.n2, p.n2
    else:
        klen, kdim, N_ct, n_ct, n1_ct = 2 * p.n, p.n, p.n2, p.n, p.n1
    tag(rsd_combinatorial_bits(m, klen, kdim, p.w), "pk")
    tag(rsd_maxminors_bits(m, klen, kdim, p.w, omega), "pk")
    if p.structure != "ideal":
        tag(rsl_combinatorial_bits(m, klen, kdim, p.w, p.n1), "pk")
        _alg(out, tag, m, klen, kdim, p.w, p.n1, omega, "pk")
    if p.w2:
        tag(nhrsd_combinatorial_bits(m, n_ct, n1_ct, p.w1, p.w2), "ct")
        tag(nhrsd_maxminors_bits(m, n_ct, n1_ct, p.w1, p.w2, omega), "ct")
        for N in (N_ct, *extra_N):
            tag(nhrsl_combinatorial_bits(m, n_ct, n1_ct, p.w1, p.w2, N), "ct")
    else:
        clen = 2 * n_ct + n1_ct
        tag(rsd_combinatorial_bits(m, clen, n_ct, p.w1), "ct")
        tag(rsd_maxminors_bits(m, clen, n_ct, p.w1, omega), "ct")
        for N in (N_ct, *extra_N):
            tag(rsl_combinatorial_bits(m, clen, n_ct, p.w1, N), "ct")
            _alg(out, tag, m, clen, n_ct, p.w1, N, omega, "ct")
    return out


def _alg(out, tag, m, n, k, r, N, omega, what):
    if N > n - k - r:
        tag(rsl_algebraic_bits(m, n, k, r, N, omega), what)
