"""Circulant graphs ``Cay(Z_n, S)`` and the graphs built from them."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property

from .autoeng import ColoredGraph
from .zmod import (ResidueSet, check_cap, full_mask, mask_elements, mask_of, mask_scale,
                   mask_translate, prime_factors)


class ParseError(ValueError):
    pass


def even_mask(n: int) -> int:
    return mask_of(n, range(0, n, 2))


def is_symmetric_mask(mask: int, n: int) -> bool:
    return mask_scale(mask, n - 1, n) == mask if n > 1 else True


@dataclass(frozen=True)
class ConnectionSet:
    """A symmetric subset of ``Z_n \\ {0}``."""

    modulus: int
    mask: int

    def __post_init__(self):
        n = self.modulus
        if n < 1:
            raise ValueError("order must be positive")
        if self.mask >> n:
            raise ValueError("element out of range")
        if self.mask & 1:
            raise ValueError("0 is not allowed in a connection set")
        if not is_symmetric_mask(self.mask, n):
            raise ValueError("connection set is not closed under negation")

    @classmethod
    def of(cls, n: int, values) -> ConnectionSet:
        return cls(n, mask_of(n, values))

    @classmethod
    def symmetric_closure(cls, n: int, values) -> ConnectionSet:
        return cls(n, mask_of(n, [v for x in values for v in (x, -x)]))

    @classmethod
    def parse(cls, text: str) -> ConnectionSet:
        """Parse ``n:s1,s2,...`` (ascending, distinct residues)."""
        m = re.fullmatch(r"\s*(\d+)\s*:\s*([\d,\s]*)", text)
        if not m:
            raise ParseError(f"expected 'n:s1,s2,...', got {text!r}")
        n = int(m.group(1))
        if n < 1:
            raise ParseError("order must be positive")
        body = m.group(2).strip()
        values = [int(x) for x in body.split(",") if x.strip()] if body else []
        if body and len(values) != len(body.split(",")):
            raise ParseError(f"empty element in {text!r}")
        if values != sorted(set(values)):
            raise ParseError("elements must be ascending and distinct")
        for v in values:
            if v == 0:
                raise ParseError("0 is not allowed in a connection set")
            if not 0 < v < n:
                raise ParseError(f"{v} is out of range for Z_{n}")
        mask = mask_of(n, values)
        if not is_symmetric_mask(mask, n):
            raise ParseError("connection set is not closed under negation")
        return cls(n, mask)

    def literal(self) -> str:
        return f"{self.modulus}:" + ",".join(map(str, self.elements))

    __str__ = literal

    @cached_property
    def elements(self) -> list[int]:
        return mask_elements(self.mask)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> (x % self.modulus) & 1)

    def as_residue_set(self) -> ResidueSet:
        return ResidueSet(self.modulus, self.mask)

    @property
    def even_part(self) -> int:
        """Mask of ``S_e``; for odd ``n`` every residue counts as even."""
        n = self.modulus
        return self.mask & even_mask(n) if n % 2 == 0 else self.mask

    @property
    def odd_part(self) -> int:
        return self.mask & ~self.even_part

    def translate(self, h: int) -> int:
        return mask_translate(self.mask, h, self.modulus)

    def scale(self, m: int) -> ConnectionSet:
        return ConnectionSet(self.modulus, mask_scale(self.mask, m, self.modulus))


@dataclass(frozen=True)
class CirculantGraph:
    connection: ConnectionSet

    @classmethod
    def of(cls, n: int, values) -> CirculantGraph:
        return cls(ConnectionSet.of(n, values))

    @classmethod
    def parse(cls, text: str) -> CirculantGraph:
        return cls(ConnectionSet.parse(text))

    @property
    def n(self) -> int:
        return self.connection.modulus

    @property
    def mask(self) -> int:
        return self.connection.mask

    def neighbour_mask(self, v: int) -> int:
        return mask_translate(self.mask, v, self.n)

    def adjacent(self, u: int, v: int) -> bool:
        return (v - u) % self.n in self.connection

    @cached_property
    def graph(self) -> ColoredGraph:
        n = self.n
        return ColoredGraph.unchecked(tuple(self.neighbour_mask(v) for v in range(n)), (0,) * n)

    def __str__(self) -> str:
        return f"Cay(Z_{self.n}, {{{','.join(map(str, self.connection.elements))}}})"


def _bfs_component(adj_rows, start=0) -> int:
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= adj_rows[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~seen
        seen |= nxt
    return seen


def is_connected_gcd(x: CirculantGraph) -> bool:
    g = x.n
    for s in x.connection.elements:
        g = math.gcd(g, s)
    return g == 1


def is_connected_bfs(x: CirculantGraph) -> bool:
    return _bfs_component(x.graph.adj) == full_mask(x.n)


def is_connected(x: CirculantGraph) -> bool:
    return is_connected_gcd(x)


def two_colouring(adj_rows) -> list[int] | None:
    n = len(adj_rows)
    colour = [-1] * n
    for s in range(n):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            row = adj_rows[v]
            while row:
                low = row & -row
                u = low.bit_length() - 1
                row ^= low
                if colour[u] < 0:
                    colour[u] = 1 - colour[v]
                    stack.append(u)
                elif colour[u] == colour[v]:
                    return None
    return colour


def is_bipartite(x: CirculantGraph) -> bool:
    return two_colouring(x.graph.adj) is not None


def twin_translation(x: CirculantGraph) -> int | None:
    """Smallest nonzero ``h`` with ``h + S = S``, if any."""
    n, mask = x.n, x.mask
    for h in range(1, n):
        if mask_translate(mask, h, n) == mask:
            return h
    return None


def is_twin_free(x: CirculantGraph) -> bool:
    return twin_translation(x) is None


def is_twin_free_bruteforce(x: CirculantGraph) -> bool:
    rows = x.graph.adj
    return len(set(rows)) == len(rows)


def twin_free_mask(mask: int, n: int) -> bool:
    """Translation test restricted to minimal subgroups ``<n/p>``."""
    return all(mask_translate(mask, n // p, n) != mask for p in prime_factors(n))


def double_cover(x: CirculantGraph) -> ColoredGraph:
    """The canonical bipartite double cover, vertex ``(v, i)`` at ``v + i*n``."""
    n = x.n
    rows = [0] * (2 * n)
    for v in range(n):
        nb = x.neighbour_mask(v)
        rows[v] = nb << n
        rows[v + n] = nb
    return ColoredGraph.unchecked(tuple(rows), (0,) * (2 * n))


def cover_vertex(v: int, layer: int, n: int) -> int:
    return v + layer * n


def sprime_mask(s: ConnectionSet) -> int:
    """Mask of ``S' = {s in S : s + n/2 not in S}``."""
    n = s.modulus
    if n % 2:
        raise ValueError("order must be even")
    return s.mask & ~mask_translate(s.mask, n // 2, n)


@dataclass(frozen=True)
class AuxGraph:
    graph: ColoredGraph
    connection_mask: int
    loops: bool


def aux_2sprime_graph(x: CirculantGraph) -> AuxGraph:
    """``Cay(Z_n x Z_2, 2S' x {0})`` on the double-cover vertex set.

    A zero in ``2S'`` would be a loop at every vertex; it is reported through
    ``loops`` (and the graph's ``loop_colors``) instead of as an edge.
    """
    n = x.n
    sp = sprime_mask(x.connection)
    doubled = mask_scale(sp, 2, n)
    loops = bool(doubled & 1)
    conn = doubled & ~1
    rows = [0] * (2 * n)
    for v in range(n):
        nb = mask_translate(conn, v, n)
        rows[v] = nb
        rows[v + n] = nb << n
    return AuxGraph(ColoredGraph(tuple(rows), (0,) * (2 * n), frozenset({0}) if loops else frozenset()),
                    doubled, loops)


def even_subgraph(x: CirculantGraph) -> CirculantGraph:
    """``Cay(2Z_n, S_e)`` transported to ``Z_{n/2}`` by ``2k -> k``."""
    n = x.n
    if n % 2:
        raise ValueError("order must be even")
    half = n // 2
    return CirculantGraph(ConnectionSet.of(half, [s // 2 for s in mask_elements(x.connection.even_part)]))


def symmetric_masks(n: int):
    """Every symmetric subset of ``Z_n \\ {0}`` as a mask."""
    pairs = [mask_of(n, (s, -s)) for s in range(1, n // 2 + 1)]
    for choice in range(1 << len(pairs)):
        mask = 0
        for i, pm in enumerate(pairs):
            if choice >> i & 1:
                mask |= pm
        yield mask


def circulant_from_literal(text: str) -> CirculantGraph:
    x = CirculantGraph.parse(text)
    check_cap(x.n)
    return x
