"""Circulant graphs of order twice a prime."""

from __future__ import annotations

from dataclasses import dataclass

from .circulant import CirculantGraph, ConnectionSet, is_bipartite, is_connected, twin_translation
from .conditions import PermPair, check_c4, verify_perm_pair
from .zmod import is_prime, mask_elements, mask_scale, mask_translate, units


class NotTwicePrime(ValueError):
    pass


class TrivialCase(ValueError):
    """The graph is disconnected, bipartite or has twins."""


@dataclass(frozen=True)
class TwoPrimeClassification:
    p: int
    m: int
    even_part: tuple[int, ...]

    @property
    def n(self) -> int:
        return 2 * self.p

    def perm_pair(self) -> PermPair:
        n, m = self.n, self.m
        return PermPair(tuple(m * v % n for v in range(n)), tuple((m * v + self.p) % n for v in range(n)))


def _odd_prime_half(n: int) -> int:
    if n % 2 or not is_prime(n // 2) or n // 2 == 2:
        raise NotTwicePrime(f"{n} is not twice an odd prime")
    return n // 2


def classify_2p(s: ConnectionSet) -> TwoPrimeClassification | None:
    """Smallest unit ``m`` with ``m^2 S_e = S_e``, ``m S_e != S_e`` and
    ``S = S_e | (p + m S_e)``, or ``None``.

    The result is cross-checked against the C.4 scan; under the nontriviality
    preconditions the two must agree.
    """
    n = s.modulus
    p = _odd_prime_half(n)
    x = CirculantGraph(s)
    if not is_connected(x) or is_bipartite(x) or twin_translation(x) is not None:
        raise TrivialCase(f"{s.literal()} is disconnected, bipartite or has twins")
    se = s.even_part
    found = None
    for m in units(n):
        mse = mask_scale(se, m, n)
        if mse == se or mask_scale(mse, m, n) != se:
            continue
        if se | mask_translate(mse, p, n) == s.mask:
            found = TwoPrimeClassification(p, m, tuple(mask_elements(se)))
            break
    if (found is None) != (check_c4(s) is None):
        raise AssertionError(f"classification and C.4 disagree on {s.literal()}")
    if found is not None and not verify_perm_pair(x, found.perm_pair()):
        raise AssertionError("classification witness fails verification")
    return found


def has_wilson_c4_2p(s: ConnectionSet) -> bool:
    n = s.modulus
    if n % 2 or not is_prime(n // 2):
        raise NotTwicePrime(f"{n} is not twice a prime")
    return check_c4(s) is not None


def orders_predicate(n: int) -> bool:
    """True when no nontrivially unstable circulant of order ``n`` exists."""
    if n < 1:
        raise ValueError("order must be positive")
    if n % 2 or n < 8:
        return True
    p = n // 2
    return is_prime(p) and p % 4 == 3
