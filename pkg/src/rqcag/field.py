"""Arithmetic in GF(2^m) for 2 <= m <= 128.

Elements are plain Python ints, bit i holding the coefficient of x^i in the
polynomial basis. A `GF2m` context carries the modulus and also offers a
"packed" representation where a whole vector of elements lives in one big
int, each element in its own fixed-width slot. XOR on packed ints is vector
addition, and scalar multiplication / squaring can be done for the whole
vector with a handful of big-int shifts. This is what makes the decoder and
the schemes usable from pure Python.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np


class ZeroInverse(ZeroDivisionError):
    pass


# ---------------------------------------------------------------- F_2[x]

def clmul(a: int, b: int) -> int:
    """Carry-less product of two F_2[x] polynomials."""
    if a.bit_length() < b.bit_length():
        a, b = b, a
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def f2_mod(a: int, f: int) -> int:
    df = f.bit_length() - 1
    while a.bit_length() - 1 >= df:
        a ^= f << (a.bit_length() - 1 - df)
    return a


def f2_divmod(a: int, f: int) -> tuple[int, int]:
    df = f.bit_length() - 1
    q = 0
    while a.bit_length() - 1 >= df:
        s = a.bit_length() - 1 - df
        q |= 1 << s
        a ^= f << s
    return q, a


def f2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, f2_mod(a, b)
    return a


def f2_is_irreducible(f: int) -> bool:
    """Rabin-style test: no factor of degree <= deg(f)/2.

    Checks gcd(x^(2^i) - x, f) = 1 for i = 1 .. deg/2.
    """
    d = f.bit_length() - 1
    if d < 1:
        return False
    t = 2
    for _ in range(d // 2):
        t = f2_mod(clmul(t, t), f)
        if f2_gcd(t ^ 2, f) != 1:
            return False
    return True


# Smallest-integer irreducible polynomial of each degree (bit i = x^i).
# Produced by scripts/gen_irreducibles.py and frozen here.
IRREDUCIBLE: dict[int, int] = {
    2: 0x7, 3: 0xb, 4: 0x13, 5: 0x25,
    6: 0x43, 7: 0x83, 8: 0x11b, 9: 0x203,
    10: 0x409, 11: 0x805, 12: 0x1009, 13: 0x201b,
    14: 0x4021, 15: 0x8003, 16: 0x1002b, 17: 0x20009,
    18: 0x40009, 19: 0x80027, 20: 0x100009, 21: 0x200005,
    22: 0x400003, 23: 0x800021, 24: 0x100001b, 25: 0x2000009,
    26: 0x400001b, 27: 0x8000027, 28: 0x10000003, 29: 0x20000005,
    30: 0x40000003, 31: 0x80000009, 32: 0x10000008d, 33: 0x20000004b,
    34: 0x40000001b, 35: 0x800000005, 36: 0x1000000035, 37: 0x200000003f,
    38: 0x4000000063, 39: 0x8000000011, 40: 0x10000000039, 41: 0x20000000009,
    42: 0x40000000027, 43: 0x80000000059, 44: 0x100000000021, 45: 0x20000000001b,
    46: 0x400000000003, 47: 0x800000000021, 48: 0x100000000002d, 49: 0x2000000000071,
    50: 0x400000000001d, 51: 0x800000000004b, 52: 0x10000000000009, 53: 0x20000000000047,
    54: 0x4000000000007d, 55: 0x80000000000047, 56: 0x100000000000095, 57: 0x200000000000011,
    58: 0x400000000000063, 59: 0x80000000000007b, 60: 0x1000000000000003, 61: 0x2000000000000027,
    62: 0x4000000000000069, 63: 0x8000000000000003, 64: 0x1000000000000001b, 65: 0x2000000000000001b,
    66: 0x40000000000000009, 67: 0x80000000000000027, 68: 0x1000000000000000a3, 69: 0x200000000000000065,
    70: 0x40000000000000002b, 71: 0x80000000000000002b, 72: 0x100000000000000005f, 73: 0x200000000000000001d,
    74: 0x4000000000000000047, 75: 0x800000000000000004b, 76: 0x10000000000000000035, 77: 0x20000000000000000065,
    78: 0x4000000000000000005f, 79: 0x8000000000000000001d, 80: 0x1000000000000000000af, 81: 0x200000000000000000011,
    82: 0x4000000000000000000d7, 83: 0x800000000000000000095, 84: 0x1000000000000000000021, 85: 0x2000000000000000000107,
    86: 0x4000000000000000000065, 87: 0x80000000000000000000a3, 88: 0x1000000000000000000003f, 89: 0x20000000000000000000069,
    90: 0x4000000000000000000002d, 91: 0x800000000000000000000ed, 92: 0x100000000000000000000065, 93: 0x200000000000000000000005,
    94: 0x400000000000000000000063, 95: 0x800000000000000000000077, 96: 0x100000000000000000000006f, 97: 0x2000000000000000000000041,
    98: 0x4000000000000000000000099, 99: 0x800000000000000000000004b, 100: 0x10000000000000000000000065, 101: 0x200000000000000000000000c3,
    102: 0x40000000000000000000000069, 103: 0x800000000000000000000000bd, 104: 0x10000000000000000000000001b, 105: 0x200000000000000000000000011,
    106: 0x400000000000000000000000063, 107: 0x8000000000000000000000000af, 108: 0x1000000000000000000000000053, 109: 0x2000000000000000000000000035,
    110: 0x4000000000000000000000000053, 111: 0x8000000000000000000000000095, 112: 0x10000000000000000000000000039, 113: 0x2000000000000000000000000002d,
    114: 0x4000000000000000000000000002d, 115: 0x800000000000000000000000000af, 116: 0x100000000000000000000000000017, 117: 0x200000000000000000000000000027,
    118: 0x400000000000000000000000000065, 119: 0x800000000000000000000000000101, 120: 0x100000000000000000000000000001b, 121: 0x2000000000000000000000000000123,
    122: 0x4000000000000000000000000000047, 123: 0x8000000000000000000000000000005, 124: 0x1000000000000000000000000000007d, 125: 0x200000000000000000000000000000af,
    126: 0x40000000000000000000000000000095, 127: 0x80000000000000000000000000000003, 128: 0x100000000000000000000000000000087,
}


# byte -> its bits spread to even positions, split into low / high byte
_SPREAD = [sum(((v >> i) & 1) << (2 * i) for i in range(8)) for v in range(256)]
_SPREAD_LO = bytes(s & 0xFF for s in _SPREAD)
_SPREAD_HI = bytes(s >> 8 for s in _SPREAD)


def spread_bits(x: int) -> int:
    """Square of x in F_2[x] (no reduction): bit i goes to bit 2i."""
    if x < 256:
        return _SPREAD[x]
    nb = (x.bit_length() + 7) // 8
    b = x.to_bytes(nb, "little")
    out = bytearray(2 * nb)
    out[0::2] = b.translate(_SPREAD_LO)
    out[1::2] = b.translate(_SPREAD_HI)
    return int.from_bytes(out, "little")


class GF2m:
    """The field F_2[x]/(modulus). Immutable; share freely."""

    __slots__ = ("m", "modulus", "mask", "tail", "order", "slot", "_slot_bytes")

    def __init__(self, m: int, modulus: int | None = None):
        if not 2 <= m <= 128:
            raise ValueError(f"extension degree {m} out of range 2..128")
        if modulus is None:
            modulus = IRREDUCIBLE[m]
        if modulus.bit_length() - 1 != m:
            raise ValueError("modulus degree does not match m")
        self.m = m
        self.modulus = modulus
        self.mask = (1 << m) - 1
        # exponents t with x^m = sum x^t
        self.tail = tuple(t for t in range(m) if (modulus >> t) & 1)
        self.order = 1 << m
        # packed slot width: byte aligned and wide enough for a raw product
        self.slot = 8 * ((2 * m + 7) // 8)
        self._slot_bytes = self.slot // 8

    def __repr__(self):
        return f"GF2m(m={self.m}, modulus={self.modulus:#x})"

    def __eq__(self, other):
        return isinstance(other, GF2m) and (self.m, self.modulus) == (other.m, other.modulus)

    def __hash__(self):
        return hash((self.m, self.modulus))

    # ------------------------------------------------------ single elements

    def reduce(self, a: int) -> int:
        m, mask, tail = self.m, self.mask, self.tail
        while a >> m:
            h = a >> m
            a &= mask
            for t in tail:
                a ^= h << t
        return a

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a.bit_length() < b.bit_length():
            a, b = b, a
        if b < 16:
            r = 0
            while b:
                if b & 1:
                    r ^= a
                a <<= 1
                b >>= 1
            return self.reduce(r)
        # 4-bit window
        a2 = a << 1
        a4 = a << 2
        a8 = a << 3
        tab = (0, a, a2, a2 ^ a, a4, a4 ^ a, a4 ^ a2, a4 ^ a2 ^ a,
               a8, a8 ^ a, a8 ^ a2, a8 ^ a2 ^ a, a8 ^ a4, a8 ^ a4 ^ a,
               a8 ^ a4 ^ a2, a8 ^ a4 ^ a2 ^ a)
        r = 0
        s = 0
        while b:
            r ^= tab[b & 15] << s
            b >>= 4
            s += 4
        return self.reduce(r)

    def sq(self, a: int) -> int:
        return self.reduce(spread_bits(a))

    def frobenius(self, a: int, i: int) -> int:
        """a^(2^i); i is taken mod m."""
        i %= self.m
        for _ in range(i):
            a = self.reduce(spread_bits(a))
        return a

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroInverse("0 has no inverse")
        # extended Euclid in F_2[x]
        r0, r1 = self.modulus, a
        s0, s1 = 0, 1
        while r1 != 1:
            q, r = f2_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 ^ clmul(q, s1)
        return self.reduce(s1)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def batch_inv(self, values) -> list[int]:
        """Inverses of many nonzero elements with a single field inversion."""
        values = list(values)
        pref = []
        acc = 1
        for v in values:
            if not v:
                raise ZeroInverse("0 has no inverse")
            pref.append(acc)
            acc = self.mul(acc, v)
        inv = self.inv(acc)
        out = [0] * len(values)
        for i in range(len(values) - 1, -1, -1):
            out[i] = self.mul(inv, pref[i])
            inv = self.mul(inv, values[i])
        return out

    def pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.sq(a)
            e >>= 1
        return r

    def random(self, rng) -> int:
        return rng.getrandbits(self.m)

    def random_nonzero(self, rng) -> int:
        while True:
            a = rng.getrandbits(self.m)
            if a:
                return a

    # ------------------------------------------------------- packed vectors
    #
    # slot i of the big int holds element i; slots are `self.slot` bits wide,
    # which leaves room for an unreduced product (< 2^(2m-1)).

    @lru_cache(maxsize=None)
    def _masks(self, n: int) -> tuple[int, int]:
        lo = hi = 0
        lm = self.mask
        hm = (1 << (self.m - 1)) - 1
        for s in range(n):
            lo |= lm << (s * self.slot)
            hi |= hm << (s * self.slot)
        return lo, hi

    def pack(self, values) -> int:
        sb = self._slot_bytes
        return int.from_bytes(b"".join(v.to_bytes(sb, "little") for v in values), "little")

    def unpack(self, x: int, n: int) -> list[int]:
        sb = self._slot_bytes
        b = x.to_bytes(n * sb, "little")
        return [int.from_bytes(b[i * sb:(i + 1) * sb], "little") for i in range(n)]

    def vget(self, x: int, i: int) -> int:
        return (x >> (i * self.slot)) & self.mask

    def vreduce(self, x: int, n: int) -> int:
        m, tail = self.m, self.tail
        lo, hi_mask = self._masks(n)
        while True:
            h = (x >> m) & hi_mask
            if not h:
                return x
            x &= lo
            for t in tail:
                x ^= h << t

    def vscale(self, b: int, x: int, n: int) -> int:
        """Multiply every slot of packed x (n slots) by the scalar b."""
        if b < 2:
            return x if b else 0
        x2 = x << 1
        x4 = x << 2
        x8 = x << 3
        tab = (0, x, x2, x2 ^ x, x4, x4 ^ x, x4 ^ x2, x4 ^ x2 ^ x,
               x8, x8 ^ x, x8 ^ x2, x8 ^ x2 ^ x, x8 ^ x4, x8 ^ x4 ^ x,
               x8 ^ x4 ^ x2, x8 ^ x4 ^ x2 ^ x)
        r = 0
        s = 0
        while b:
            r ^= tab[b & 15] << s
            b >>= 4
            s += 4
        return self.vreduce(r, n)

    def vsquare(self, x: int, n: int) -> int:
        """Slot-wise squaring of packed x."""
        if not x:
            return 0
        sb = self._slot_bytes
        b = x.to_bytes(n * sb, "little")
        out = bytearray(2 * n * sb)
        out[0::2] = b.translate(_SPREAD_LO)
        out[1::2] = b.translate(_SPREAD_HI)
        # slot i now spans bytes [2i*sb, 2(i+1)*sb); its square fits in the first sb
        comp = np.frombuffer(out, dtype=np.uint8).reshape(n, 2 * sb)[:, :sb].tobytes()
        return self.vreduce(int.from_bytes(comp, "little"), n)

    def vfrob(self, x: int, n: int, i: int) -> int:
        for _ in range(i % self.m):
            x = self.vsquare(x, n)
        return x

    def vmul(self, x: int, y: int, n: int) -> int:
        """Slot-wise product of two packed vectors."""
        lo, _ = self._masks(n)
        ones = self._ones(n)
        r = 0
        for j in range(self.m):
            bits = (y >> j) & ones
            if bits:
                r ^= (x & (bits * self.mask)) << j
        return self.vreduce(r, n)

    @lru_cache(maxsize=None)
    def _ones(self, n: int) -> int:
        r = 0
        for s in range(n):
            r |= 1 << (s * self.slot)
        return r


@lru_cache(maxsize=None)
def field(m: int) -> GF2m:
    """Shared context with the built-in modulus."""
    return GF2m(m)
