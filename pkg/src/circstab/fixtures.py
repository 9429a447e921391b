"""Parametrized example families, built from their defining parameters."""

from __future__ import annotations

import math

from .circulant import ConnectionSet
from .zmod import is_prime


def val8_connection(ell: int) -> ConnectionSet:
    """Valency-8 family on ``n = 3 * 2**ell`` (``ell >= 4`` even)."""
    if ell < 4 or ell % 2:
        raise ValueError("ell must be even and at least 4")
    n = 3 * 2 ** ell
    half = n // 2
    return ConnectionSet.symmetric_closure(n, [3, 6, n // 12, half + 3])


def val8_isomorphism(ell: int) -> tuple[int, ...]:
    """``v -> m v + rho(v) n/2`` with ``m = n/6 - 1``; maps ``S`` onto ``S + n/2``."""
    s = val8_connection(ell)
    n = s.modulus
    m = n // 6 - 1

    def rho(v):
        w = v if v % 2 == 0 else v + 1
        return (w % 4) // 2

    return tuple((m * v + rho(v) * (n // 2)) % n for v in range(n))


def _check_iso_params(p: int, a: int, c: int) -> int:
    if not is_prime(p) or p % 4 != 1:
        raise ValueError("p must be a prime congruent to 1 mod 4")
    n = 2 * p * p
    if n // math.gcd(a % n, n) != p:
        raise ValueError(f"{a} does not have order {p} in Z_{n}")
    if (c * c + 1) % p:
        raise ValueError(f"{c}^2 is not -1 mod {p}")
    return n


def iso_translate_connection(p: int, a: int, c: int) -> ConnectionSet:
    """Order ``2p^2`` family isomorphic to its translate by ``n/2``."""
    n = _check_iso_params(p, a, c)
    half = n // 2
    cyc = [k * a % n for k in range(p)]
    even = {(e + x) % n for e in (2, -2) for x in cyc} | {a % n, -a % n}
    odd_shifted = {(e + x) % n for e in (2, -2) for x in cyc} | {c * a % n, -c * a % n}
    odd = {(half + x) % n for x in odd_shifted}
    return ConnectionSet.of(n, even | odd)


def iso_translate_isomorphism(p: int, a: int, c: int) -> tuple[int, ...]:
    """``r + x -> r + c x`` over coset representatives closed under ``+ n/2``."""
    n = _check_iso_params(p, a, c)
    half = n // 2
    sub = sorted({k * a % n for k in range(p)})
    rep = [None] * n
    for v in range(n):
        if rep[v] is not None:
            continue
        for r in (v, (v + half) % n):
            for x in sub:
                rep[(r + x) % n] = r
    out = []
    for v in range(n):
        r = rep[v]
        out.append((r + c * (v - r)) % n)
    return tuple(out)


# the six order-24 graphs listed without a Wilson type
ORDER24_NO_WILSON = (
    (2, 3, 8, 9, 10),
    (2, 3, 8, 9, 10, 12),
    (1, 2, 5, 7, 8, 10, 11),
    (1, 2, 5, 7, 8, 10, 11, 12),
    (1, 2, 3, 5, 7, 8, 9, 10, 11),
    (1, 2, 3, 5, 7, 8, 9, 10, 11, 12),
)


def order24_exceptions() -> list[ConnectionSet]:
    return [ConnectionSet.symmetric_closure(24, gens) for gens in ORDER24_NO_WILSON]
