"""Multi-RQC-AG (ideal) and Multi-UR-AG (unstructured) public-key encryption.

Both schemes encrypt k field elements as the message polynomial of an
augmented Gabidulin code of length n1*n2, folded into an n2 x n1 matrix
and masked by a noisy product with the public key.

Ideal ("rqc"):
    pk = (g, h, s = x + h.y mod P),  sk = (x, y)
    U = R1 + h.R2,  V = fold(mG) + s.R2 + E,  decode(unfold(V - y.U))
Unstructured ("ur"):
    pk = (g, H, S = X + H Y),  sk = (X, Y)
    U = R1 + R2 H,  V = fold(mG) + R2 S + E,  decode(unfold(V - U Y))

All randomness comes from 40-byte seeds expanded with SHAKE-256 under the
labels "g", "h", "sk" and "enc".
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .f2linalg import (LowRank, rank_of, sample_basis, sample_full_weight_blocks,
                       sample_nh_triple)
from .field import GF2m, field
from .gabidulin import AugGabCode, DecodeOutcome, capacity, dfr_bits
from .ideal import IdealRing, fold, lowrank_masks, unfold

SEED_BYTES = 40


class DecryptFailure(Exception):
    def __init__(self, outcome: DecodeOutcome):
        super().__init__(outcome.failure.value if outcome.failure else "failure")
        self.outcome = outcome


# ------------------------------------------------------------- parameters

@dataclass(frozen=True)
class ParameterSet:
    name: str
    structure: str  # "ideal" or "random"
    m: int
    n_prime: int
    n1: int
    n2: int
    k: int
    epsilon: int
    w: int
    w1: int
    w2: int
    level: int
    n: int = 0  # random-code length, unstructured sets only
    dfr_reference: int = 0  # log2 DFR as tabulated alongside the set

    def __post_init__(self):
        if self.structure not in ("ideal", "random"):
            raise ValueError("structure must be 'ideal' or 'random'")
        if self.structure == "random" and self.n <= 0:
            raise ValueError("unstructured sets need n")
        if self.delta != capacity(self.n_prime, self.k, self.epsilon):
            raise ValueError(f"{self.name}: w*w1 + w2 does not match the decoding capacity")
        if not self.k <= self.n_prime < self.m < self.gab_len:
            raise ValueError(f"{self.name}: need k <= n' < m < n1*n2")

    @property
    def delta(self) -> int:
        return self.w * self.w1 + self.w2

    @property
    def gab_len(self) -> int:
        return self.n1 * self.n2

    @property
    def homogeneous(self) -> bool:
        return self.w2 == 0

    @property
    def field(self) -> GF2m:
        return field(self.m)

    @property
    def pk_bytes(self) -> int:
        if self.structure == "ideal":
            return SEED_BYTES + (self.n2 * self.m + 7) // 8
        return SEED_BYTES + (self.n * self.n1 * self.m + 7) // 8

    @property
    def sk_bytes(self) -> int:
        return SEED_BYTES

    @property
    def ct_bytes(self) -> int:
        if self.structure == "ideal":
            return (2 * self.n1 * self.n2 * self.m + 7) // 8
        return (self.m * (self.n2 * self.n + self.n2 * self.n1) + 7) // 8

    @property
    def msg_bytes(self) -> int:
        return (self.k * self.m + 7) // 8

    def dfr_bits(self) -> float:
        return dfr_bits(self.delta, self.gab_len - self.n_prime, self.epsilon)


def _p(name, structure, m, n_prime, n1, n2, k, eps, w, w1, w2, level, n=0, dfr=0):
    return ParameterSet(name, structure, m, n_prime, n1, n2, k, eps, w, w1, w2, level, n, dfr)


PARAMS: dict[str, ParameterSet] = {p.name: p for p in [
    _p("multi-rqc-ag-128", "ideal", 83, 82, 5, 38, 2, 74, 7, 11, 0, 128, dfr=-138),
    _p("nh-multi-rqc-ag-128", "ideal", 61, 60, 3, 50, 3, 51, 7, 7, 5, 128, dfr=-158),
    _p("multi-rqc-ag-192", "ideal", 113, 112, 4, 60, 2, 98, 8, 13, 0, 192, dfr=-215),
    _p("nh-multi-rqc-ag-192", "ideal", 79, 78, 2, 95, 5, 65, 8, 8, 5, 192, dfr=-238),
    _p("multi-ur-ag-128", "random", 97, 96, 14, 15, 3, 83, 8, 11, 0, 128, n=24, dfr=-190),
    _p("nh-multi-ur-ag-128", "random", 73, 72, 13, 14, 2, 66, 8, 8, 4, 128, n=22, dfr=-133),
    _p("multi-ur-ag-192", "random", 127, 126, 15, 16, 3, 93, 9, 12, 0, 192, n=35, dfr=-350),
    _p("nh-multi-ur-ag-192", "random", 97, 96, 14, 14, 3, 77, 9, 9, 4, 192, n=30, dfr=-214),
]}


def get_params(name: str) -> ParameterSet:
    try:
        return PARAMS[name.lower()]
    except KeyError:
        raise KeyError(f"unknown parameter set {name!r}; known: {', '.join(PARAMS)}") from None


def sizes(params: ParameterSet) -> tuple[int, int]:
    return params.pk_bytes, params.ct_bytes


# -------------------------------------------------------------------- XOF

class Xof:
    """SHAKE-256 in counter mode, exposing `getrandbits` like random.Random."""

    BLOCK = 4096

    def __init__(self, seed: bytes, label: str):
        self._prefix = b"rqcag|" + label.encode() + b"|" + bytes(seed)
        self._buf = b""
        self._pos = 0
        self._ctr = 0

    def read(self, n: int) -> bytes:
        while len(self._buf) - self._pos < n:
            blk = hashlib.shake_256(self._prefix + self._ctr.to_bytes(8, "little")).digest(self.BLOCK)
            self._buf = self._buf[self._pos:] + blk
            self._pos = 0
            self._ctr += 1
        out = self._buf[self._pos:self._pos + n]
        self._pos += n
        return out

    def getrandbits(self, k: int) -> int:
        if k <= 0:
            return 0
        return int.from_bytes(self.read((k + 7) // 8), "little") & ((1 << k) - 1)


def seed_bytes(rng) -> bytes:
    return rng.getrandbits(8 * SEED_BYTES).to_bytes(SEED_BYTES, "little")


# ------------------------------------------------------------ wire format

def elements_to_bytes(values: Sequence[int], m: int) -> bytes:
    """m bits per element, LSB first, zero-padded to a byte boundary."""
    acc = 0
    for i, v in enumerate(values):
        acc |= v << (i * m)
    return acc.to_bytes((len(values) * m + 7) // 8, "little")


def bytes_to_elements(data: bytes, m: int, count: int) -> list[int]:
    if len(data) != (count * m + 7) // 8:
        raise ValueError(f"expected {(count * m + 7) // 8} bytes, got {len(data)}")
    acc = int.from_bytes(data, "little")
    mask = (1 << m) - 1
    if acc >> (count * m):
        raise ValueError("nonzero padding bits")
    return [(acc >> (i * m)) & mask for i in range(count)]


def column_major(M: Sequence[Sequence[int]]) -> list[int]:
    return unfold(M)


def from_column_major(v: Sequence[int], rows: int, cols: int) -> list[list[int]]:
    return fold(v, cols, rows)


def msg_to_bytes(params: ParameterSet, msg: Sequence[int]) -> bytes:
    return elements_to_bytes(msg, params.m)


def msg_from_bytes(params: ParameterSet, data: bytes) -> list[int]:
    return bytes_to_elements(data, params.m, params.k)


# ------------------------------------------------------------------- keys

@dataclass
class PublicKey:
    params: ParameterSet
    seed: bytes
    s: list  # ideal: vector of n2 elements; random: n x n1 matrix

    def to_bytes(self) -> bytes:
        flat = self.s if self.params.structure == "ideal" else column_major(self.s)
        return self.seed + elements_to_bytes(flat, self.params.m)

    @classmethod
    def from_bytes(cls, params: ParameterSet, data: bytes) -> "PublicKey":
        if len(data) != params.pk_bytes:
            raise ValueError(f"public key must be {params.pk_bytes} bytes")
        seed, body = data[:SEED_BYTES], data[SEED_BYTES:]
        if params.structure == "ideal":
            s = bytes_to_elements(body, params.m, params.n2)
        else:
            s = from_column_major(bytes_to_elements(body, params.m, params.n * params.n1),
                                  params.n, params.n1)
        return cls(params, seed, s)


@dataclass
class SecretKey:
    params: ParameterSet
    seed: bytes

    def to_bytes(self) -> bytes:
        return self.seed

    @classmethod
    def from_bytes(cls, params: ParameterSet, data: bytes) -> "SecretKey":
        if len(data) != SEED_BYTES:
            raise ValueError(f"secret key must be {SEED_BYTES} bytes")
        return cls(params, bytes(data))


@dataclass
class Ciphertext:
    params: ParameterSet
    U: list[list[int]]
    V: list[list[int]]

    def to_bytes(self) -> bytes:
        return elements_to_bytes(column_major(self.U) + column_major(self.V), self.params.m)

    @classmethod
    def from_bytes(cls, params: ParameterSet, data: bytes) -> "Ciphertext":
        p = params
        ucols = p.n1 if p.structure == "ideal" else p.n
        nu = p.n2 * ucols
        vals = bytes_to_elements(data, p.m, nu + p.n2 * p.n1)
        return cls(p, from_column_major(vals[:nu], p.n2, ucols),
                   from_column_major(vals[nu:], p.n2, p.n1))


@dataclass
class KeyPair:
    pk: PublicKey
    sk: SecretKey


@dataclass
class Noise:
    """Encryption randomness, exposed for correctness checks."""
    R1: LowRank
    E: LowRank
    R2: LowRank


# ------------------------------------------------------------- expansion

def sample_points(rng, n_prime: int, m: int) -> list[int]:
    """n' F_2-independent field elements (rejection on the whole vector)."""
    while True:
        g = [rng.getrandbits(m) for _ in range(n_prime)]
        if rank_of(g) == n_prime:
            return g


@lru_cache(maxsize=16)
def expand_public(params: ParameterSet, seed: bytes):
    """(code, h or H) from the public seed; cached because the code tables are costly."""
    F = params.field
    g = sample_points(Xof(seed, "g"), params.n_prime, params.m)
    code = AugGabCode(F, params.gab_len, params.n_prime, params.k, g, params.epsilon)
    xh = Xof(seed, "h")
    if params.structure == "ideal":
        h = [xh.getrandbits(params.m) for _ in range(params.n2)]
    else:
        h = [[xh.getrandbits(params.m) for _ in range(params.n)] for _ in range(params.n)]
    return code, h


def expand_secret(params: ParameterSet, seed: bytes) -> tuple[LowRank, LowRank]:
    """(x, y) with joint support of dimension w containing 1."""
    xs = Xof(seed, "sk")
    basis = sample_basis(xs, params.w, params.m, [1])
    shape = (1, params.n2) if params.structure == "ideal" else (params.n, params.n1)
    x, y = sample_full_weight_blocks(xs, basis, [shape, shape])
    return x, y


def sample_noise(params: ParameterSet, theta: bytes) -> Noise:
    cols = params.n1 if params.structure == "ideal" else params.n
    shapes = ((params.n2, cols), (params.n2, params.n1), (params.n2, cols))
    R1, E, R2 = sample_nh_triple(Xof(theta, "enc"), params.m, params.w1, params.w2, shapes)
    return Noise(R1, E, R2)


# ---------------------------------------------------- low-rank products

def _row_masks(L: LowRank, row: int = 0) -> list[int]:
    masks = [0] * len(L.basis)
    for i, c in enumerate(L.coords[row]):
        t = 0
        while c:
            if c & 1:
                masks[t] |= 1 << i
            c >>= 1
            t += 1
    return masks


def lowrank_times_dense(F: GF2m, L: LowRank, B_rows: Sequence[int], ncols: int) -> list[list[int]]:
    """L (r x n, low rank) times B (n x ncols, rows given packed)."""
    r = len(L.coords)
    S = F.slot
    stride = ncols * S
    acc = 0
    for t, b in enumerate(L.basis):
        big = 0
        for i, row in enumerate(L.coords):
            x = 0
            for j, c in enumerate(row):
                if (c >> t) & 1:
                    x ^= B_rows[j]
            big |= x << (i * stride)
        if big:
            acc ^= F.vscale(b, big, r * ncols)
    flat = F.unpack(acc, r * ncols)
    return [flat[i * ncols:(i + 1) * ncols] for i in range(r)]


def dense_times_lowrank(F: GF2m, A_cols: Sequence[int], nrows: int, L: LowRank) -> list[list[int]]:
    """A (nrows x n, columns given packed) times L (n x c, low rank)."""
    c = len(L.coords[0])
    S = F.slot
    stride = nrows * S
    acc = 0
    for t, b in enumerate(L.basis):
        big = 0
        for j in range(c):
            x = 0
            for i, row in enumerate(L.coords):
                if (row[j] >> t) & 1:
                    x ^= A_cols[i]
            big |= x << (j * stride)
        if big:
            acc ^= F.vscale(b, big, nrows * c)
    flat = F.unpack(acc, nrows * c)
    return [[flat[j * nrows + i] for j in range(c)] for i in range(nrows)]


def _add(A, B):
    return [[a ^ b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _cols_packed(F: GF2m, M) -> list[int]:
    return [F.pack([row[j] for row in M]) for j in range(len(M[0]))]


def _rows_packed(F: GF2m, M) -> list[int]:
    return [F.pack(row) for row in M]


# ---------------------------------------------------------------- scheme

def keygen(params: ParameterSet, rng) -> KeyPair:
    return keygen_from_seeds(params, seed_bytes(rng), seed_bytes(rng))


def keygen_from_seeds(params: ParameterSet, pk_seed: bytes, sk_seed: bytes) -> KeyPair:
    F = params.field
    _, h = expand_public(params, pk_seed)
    x, y = expand_secret(params, sk_seed)
    if params.structure == "ideal":
        R = IdealRing(F, params.n2)
        hy = R.mul_lowrank_packed(F.pack(h), y.basis, _row_masks(y))
        s = F.unpack(F.pack(x.matrix()[0]) ^ hy, params.n2)
    else:
        hy = dense_times_lowrank(F, _cols_packed(F, h), params.n, y)
        s = _add(x.matrix(), hy)
    return KeyPair(PublicKey(params, pk_seed, s), SecretKey(params, sk_seed))


def encrypt(pk: PublicKey, msg: Sequence[int], theta: bytes, return_noise: bool = False):
    params = pk.params
    F = params.field
    if len(msg) != params.k:
        raise ValueError(f"message must have {params.k} field elements")
    if any(not 0 <= a < F.order for a in msg):
        raise ValueError("message entries must be field elements")
    code, h = expand_public(params, pk.seed)
    noise = sample_noise(params, theta)
    mG = fold(code.encode(list(msg)), params.n1, params.n2)
    E = noise.E.matrix()
    if params.structure == "ideal":
        R = IdealRing(F, params.n2)
        hp, sp = F.pack(h), F.pack(pk.s)
        R1 = noise.R1.matrix()
        Ucols, Vcols = [], []
        for j in range(params.n1):
            masks = lowrank_masks(noise.R2, j)
            hr = R.mul_lowrank_packed(hp, noise.R2.basis, masks)
            sr = R.mul_lowrank_packed(sp, noise.R2.basis, masks)
            Ucols.append(F.unpack(F.pack([row[j] for row in R1]) ^ hr, params.n2))
            Vcols.append(F.unpack(F.pack([row[j] for row in mG]) ^ sr
                                  ^ F.pack([row[j] for row in E]), params.n2))
        U = [[c[i] for c in Ucols] for i in range(params.n2)]
        V = [[c[i] for c in Vcols] for i in range(params.n2)]
    else:
        R2H = lowrank_times_dense(F, noise.R2, _rows_packed(F, h), params.n)
        R2S = lowrank_times_dense(F, noise.R2, _rows_packed(F, pk.s), params.n1)
        U = _add(noise.R1.matrix(), R2H)
        V = _add(_add(mG, R2S), E)
    ct = Ciphertext(params, U, V)
    return (ct, noise) if return_noise else ct


def decryption_word(pk: PublicKey, sk: SecretKey, ct: Ciphertext) -> list[int]:
    """unfold(V - y.U) (ideal) or unfold(V - U Y) (unstructured)."""
    params = ct.params
    F = params.field
    x, y = expand_secret(params, sk.seed)
    if params.structure == "ideal":
        R = IdealRing(F, params.n2)
        masks = _row_masks(y)
        cols = []
        for j in range(params.n1):
            uy = R.mul_lowrank_packed(F.pack([row[j] for row in ct.U]), y.basis, masks)
            cols.append(F.unpack(F.pack([row[j] for row in ct.V]) ^ uy, params.n2))
        W = [[c[i] for c in cols] for i in range(params.n2)]
    else:
        UY = dense_times_lowrank(F, _cols_packed(F, ct.U), params.n2, y)
        W = _add(ct.V, UY)
    return unfold(W)


def decrypt_outcome(pk: PublicKey, sk: SecretKey, ct: Ciphertext) -> DecodeOutcome:
    if not (pk.params == sk.params == ct.params):
        raise ValueError("parameter sets of pk, sk and ct differ")
    code, _ = expand_public(pk.params, pk.seed)
    return code.decode(decryption_word(pk, sk, ct))


def decrypt(pk: PublicKey, sk: SecretKey, ct: Ciphertext) -> list[int]:
    out = decrypt_outcome(pk, sk, ct)
    if not out.ok:
        raise DecryptFailure(out)
    return out.message


# -------------------------------------------------------------------- KAT

def kat_records(params: ParameterSet, count: int, master: bytes) -> list[dict[str, str]]:
    """Deterministic known-answer records derived from a master seed."""
    xof = Xof(master, "kat")
    out = []
    for i in range(count):
        pk_seed, sk_seed, theta = seed_bytes(xof), seed_bytes(xof), seed_bytes(xof)
        msg_seed = seed_bytes(xof)
        kp = keygen_from_seeds(params, pk_seed, sk_seed)
        mx = Xof(msg_seed, "msg")
        msg = [mx.getrandbits(params.m) for _ in range(params.k)]
        ct = encrypt(kp.pk, msg, theta)
        dec = decrypt(kp.pk, kp.sk, ct)
        out.append({
            "count": str(i),
            "params": params.name,
            "pk_seed": pk_seed.hex(),
            "sk_seed": sk_seed.hex(),
            "pk": kp.pk.to_bytes().hex(),
            "sk": kp.sk.to_bytes().hex(),
            "msg": msg_to_bytes(params, msg).hex(),
            "theta": theta.hex(),
            "ct": ct.to_bytes().hex(),
            "decrypted": msg_to_bytes(params, dec).hex(),
        })
    return out


def format_kat(records: list[dict[str, str]]) -> str:
    blocks = ["\n".join(f"{k} = {v}" for k, v in r.items()) for r in records]
    return "\n\n".join(blocks) + "\n"


def parse_kat(text: str) -> list[dict[str, str]]:
    recs = []
    for block in text.strip().split("\n\n"):
        rec = {}
        for line in block.strip().splitlines():
            k, _, v = line.partition(" = ")
            rec[k.strip()] = v.strip()
        if rec:
            recs.append(rec)
    return recs


def verify_kat(records: list[dict[str, str]]) -> list[str]:
    """Recompute every record; returns a list of mismatch descriptions."""
    problems = []
    for rec in records:
        params = get_params(rec["params"])
        kp = keygen_from_seeds(params, bytes.fromhex(rec["pk_seed"]), bytes.fromhex(rec["sk_seed"]))
        tag = f"record {rec['count']}"
        if kp.pk.to_bytes().hex() != rec["pk"]:
            problems.append(f"{tag}: pk mismatch")
        if kp.sk.to_bytes().hex() != rec["sk"]:
            problems.append(f"{tag}: sk mismatch")
        msg = msg_from_bytes(params, bytes.fromhex(rec["msg"]))
        ct = encrypt(kp.pk, msg, bytes.fromhex(rec["theta"]))
        if ct.to_bytes().hex() != rec["ct"]:
            problems.append(f"{tag}: ct mismatch")
        try:
            dec = decrypt(kp.pk, kp.sk, Ciphertext.from_bytes(params, bytes.fromhex(rec["ct"])))
            if msg_to_bytes(params, dec).hex() != rec["decrypted"]:
                problems.append(f"{tag}: decryption mismatch")
        except DecryptFailure as exc:
            problems.append(f"{tag}: decryption failed ({exc})")
    return problems
