"""Arithmetic in the cyclic group Z_n.

Residue sets are stored as integer bitmasks (bit ``k`` set means ``k`` is a
member), so translation is a rotation and scaling by a unit is a fixed
permutation of bit positions.  The :class:`ResidueSet` wrapper carries the
modulus and is what the public API hands around; the ``mask_*`` helpers are
the raw forms used in hot loops.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

DEFAULT_CAP = 64


def order_cap() -> int:
    """Largest admissible modulus (``CIRC_CAP`` overrides the default 64)."""
    raw = os.environ.get("CIRC_CAP")
    if raw is None:
        return DEFAULT_CAP
    return int(raw)


class CapExceeded(ValueError):
    pass


def check_cap(n: int) -> None:
    cap = order_cap()
    if n > cap:
        raise CapExceeded(f"order {n} exceeds cap {cap}")


def full_mask(n: int) -> int:
    return (1 << n) - 1


def mask_of(n: int, values: Iterable[int]) -> int:
    m = 0
    for v in values:
        m |= 1 << (v % n)
    return m


def mask_elements(mask: int) -> list[int]:
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


def mask_translate(mask: int, h: int, n: int) -> int:
    h %= n
    if h == 0:
        return mask
    return ((mask << h) | (mask >> (n - h))) & full_mask(n)


@lru_cache(maxsize=None)
def _scale_tables(n: int, m: int) -> tuple[tuple[int, ...], ...]:
    # byte-wise lookup: table[chunk][byte] -> image bits of that byte
    tables = []
    for chunk in range((n + 7) // 8):
        row = []
        for byte in range(256):
            img = 0
            for b in range(8):
                k = chunk * 8 + b
                if byte >> b & 1 and k < n:
                    img |= 1 << (m * k % n)
            row.append(img)
        tables.append(tuple(row))
    return tuple(tables)


def mask_scale(mask: int, m: int, n: int) -> int:
    """Image of a residue set under ``x -> m*x`` (any ``m``, not only units)."""
    m %= n
    if m == 1:
        return mask
    out = 0
    for table in _scale_tables(n, m):
        out |= table[mask & 0xFF]
        mask >>= 8
    return out


def mask_negate(mask: int, n: int) -> int:
    return mask_scale(mask, n - 1, n) if n > 1 else mask


@lru_cache(maxsize=None)
def units(n: int) -> tuple[int, ...]:
    """The residues coprime to ``n``, ascending.  ``units(1) == (0,)``."""
    if n < 1:
        raise ValueError("modulus must be positive")
    if n == 1:
        return (0,)
    return tuple(k for k in range(1, n) if math.gcd(k, n) == 1)


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    return tuple(d for d in range(1, n + 1) if n % d == 0)


def prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


def is_squarefree(n: int) -> bool:
    return all(n % (p * p) for p in prime_factors(n))


def has_ci_guarantee(n: int) -> bool:
    """True when every circulant of order ``n`` has the Cayley Isomorphism
    Property by Muzychuk's theorem (n square-free or twice square-free)."""
    if is_squarefree(n):
        return True
    return n % 2 == 0 and is_squarefree(n // 2)


def multiplicative_order(m: int, n: int) -> int:
    m %= n
    if math.gcd(m, n) != 1:
        raise ValueError(f"{m} is not a unit mod {n}")
    if n == 1:
        return 1
    k, x = 1, m
    while x != 1:
        x = x * m % n
        k += 1
    return k


@dataclass(frozen=True, order=True)
class Subgroup:
    """The subgroup ``dZ_n``; ``generator`` is the divisor ``d``."""

    modulus: int
    generator: int

    def __post_init__(self):
        if self.modulus % self.generator:
            raise ValueError(f"{self.generator} does not divide {self.modulus}")

    @property
    def order(self) -> int:
        return self.modulus // self.generator

    @property
    def mask(self) -> int:
        return _subgroup_mask(self.modulus, self.generator)

    def elements(self) -> list[int]:
        return list(range(0, self.modulus, self.generator))

    def __contains__(self, x: int) -> bool:
        return x % self.generator == 0

    def is_subgroup_of(self, other: Subgroup) -> bool:
        return self.generator % other.generator == 0

    def __str__(self) -> str:
        return f"<{self.generator % self.modulus}>"


@lru_cache(maxsize=None)
def _subgroup_mask(n: int, d: int) -> int:
    return mask_of(n, range(0, n, d))


def subgroup(n: int, element: int) -> Subgroup:
    """The cyclic subgroup generated by ``element``."""
    return Subgroup(n, math.gcd(element % n, n))


@lru_cache(maxsize=None)
def subgroups(n: int) -> tuple[Subgroup, ...]:
    if n < 1:
        raise ValueError("modulus must be positive")
    return tuple(sorted((Subgroup(n, d) for d in divisors(n)), key=lambda h: h.order))


@dataclass(frozen=True)
class ResidueSet:
    """An immutable subset of Z_n."""

    modulus: int
    mask: int = 0

    @classmethod
    def of(cls, n: int, values: Iterable[int] = ()) -> ResidueSet:
        return cls(n, mask_of(n, values))

    def __iter__(self) -> Iterator[int]:
        return iter(mask_elements(self.mask))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> (x % self.modulus) & 1)

    def _same(self, other: ResidueSet) -> None:
        if other.modulus != self.modulus:
            raise ValueError(f"modulus mismatch: {self.modulus} vs {other.modulus}")

    def __or__(self, other: ResidueSet) -> ResidueSet:
        self._same(other)
        return ResidueSet(self.modulus, self.mask | other.mask)

    def __and__(self, other: ResidueSet) -> ResidueSet:
        self._same(other)
        return ResidueSet(self.modulus, self.mask & other.mask)

    def __sub__(self, other: ResidueSet) -> ResidueSet:
        self._same(other)
        return ResidueSet(self.modulus, self.mask & ~other.mask)

    def issubset(self, other: ResidueSet) -> bool:
        self._same(other)
        return self.mask & ~other.mask == 0

    def sorted(self) -> list[int]:
        return mask_elements(self.mask)

    def __repr__(self) -> str:
        return f"ResidueSet({self.modulus}, {self.sorted()})"


def _residue(x, n: int) -> int:
    if isinstance(x, Residue):
        if x.modulus != n:
            raise ValueError(f"modulus mismatch: {x.modulus} vs {n}")
        return x.value
    return x % n


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1 or not 0 <= self.value < self.modulus:
            raise ValueError(f"{self.value} is not a residue mod {self.modulus}")


def translate_set(a: ResidueSet, h) -> ResidueSet:
    """``{x + h : x in a}``."""
    n = a.modulus
    return ResidueSet(n, mask_translate(a.mask, _residue(h, n), n))


def scale_set(a: ResidueSet, m) -> ResidueSet:
    """``{m * x : x in a}``."""
    n = a.modulus
    return ResidueSet(n, mask_scale(a.mask, _residue(m, n), n))
