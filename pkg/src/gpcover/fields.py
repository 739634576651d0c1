"""Finite fields GF(q) for q a small prime power, as lookup tables.

Elements are integers 0..q-1 read as base-p digit vectors of a polynomial
modulo the lexicographically smallest monic irreducible of degree k.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import InputError


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, k) with q = p**k, or None."""
    if q < 2:
        return None
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        return q, 1
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    return (p, k) if q == 1 else None


def _polymulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    k = len(mod) - 1
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for i in range(k + 1):
                prod[d - k + i] = (prod[d - k + i] - c * mod[i]) % p
    return prod[:k]


def _digits(x: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        out.append(x % p)
        x //= p
    return out


def _undigits(ds: list[int], p: int) -> int:
    x = 0
    for d in reversed(ds):
        x = x * p + d
    return x


def _is_irreducible(mod: list[int], p: int) -> bool:
    # trial division by every monic polynomial of degree <= k/2
    k = len(mod) - 1
    for d in range(1, k // 2 + 1):
        for low in range(p**d):
            div = _digits(low, p, d) + [1]
            rem = list(mod)
            for s in range(k - d, -1, -1):
                c = rem[s + d]
                if c:
                    for i in range(d + 1):
                        rem[s + i] = (rem[s + i] - c * div[i]) % p
            if not any(rem[:d]):
                return False
    return True


class GF:
    """GF(q) with ``add``, ``mul``, ``neg``, ``inv`` tables and a primitive element."""

    def __init__(self, q: int):
        pk = prime_power(q)
        if pk is None:
            raise InputError(f"q={q} is not a prime power")
        p, k = pk
        self.q, self.p, self.k = q, p, k
        if k == 1:
            self.modulus = [0, 1]
        else:
            for low in range(p**k):
                mod = _digits(low, p, k) + [1]
                if mod[0] and _is_irreducible(mod, p):
                    self.modulus = mod
                    break
        digits = [_digits(x, p, k) for x in range(q)]
        self.add = [[_undigits([(a + b) % p for a, b in zip(da, db)], p) for db in digits] for da in digits]
        if k == 1:
            self.mul = [[(a * b) % p for b in range(q)] for a in range(q)]
        else:
            self.mul = [
                [_undigits(_polymulmod(da, db, self.modulus, p), p) for db in digits] for da in digits
            ]
        self.neg = [self.add[x].index(0) for x in range(q)]
        self.inv = [0] + [self.mul[x].index(1) for x in range(1, q)]
        self.primitive = self._find_primitive()

    def _find_primitive(self) -> int:
        for g in range(1, self.q):
            x, order = g, 1
            while x != 1:
                x = self.mul[x][g]
                order += 1
            if order == self.q - 1:
                return g
        raise AssertionError("multiplicative group of a finite field is cyclic")

    def sub(self, a: int, b: int) -> int:
        return self.add[a][self.neg[b]]


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)
