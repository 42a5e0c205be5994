"""Regenerate the frozen modulus table in rqcag/field.py.

For each degree d in 2..128 we print the smallest integer (LSB = x^0) whose
polynomial over F_2 is irreducible, using the gcd(x^(2^i) - x, f) test.
"""
import sys


def clmul(a, b):
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def pmod(a, f):
    df = f.bit_length() - 1
    while a.bit_length() - 1 >= df:
        a ^= f << (a.bit_length() - 1 - df)
    return a


def pgcd(a, b):
    while b:
        a, b = b, pmod(a, b)
    return a


def is_irreducible(f):
    d = f.bit_length() - 1
    if d < 1:
        return False
    x = 2
    t = x
    for i in range(1, d // 2 + 1):
        t = pmod(clmul(t, t), f)
        if pgcd(t ^ x, f) != 1:
            return False
    return True


def smallest_irreducible(d):
    f = (1 << d) | 1
    while not is_irreducible(f):
        f += 2
    return f


if __name__ == "__main__":
    lo, hi = (int(a) for a in sys.argv[1:3]) if len(sys.argv) > 2 else (2, 128)
    for d in range(lo, hi + 1):
        f = smallest_irreducible(d)
        print(f"    {d}: {f:#x},")
