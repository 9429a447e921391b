"""Stability verdicts for circulant graphs and the instability criteria.

Instability is always decided by comparing ``|Aut BX|`` with ``2|Aut X|``.
The criteria below are sufficient conditions; they only annotate a report,
and every witness they emit is checked against the graph before it is
returned.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import autoeng
from .autoeng import ColoredGraph, Permutation, analyze, is_isomorphic
from .circulant import (CirculantGraph, ConnectionSet, double_cover, even_subgraph,
                        is_bipartite, is_connected, twin_translation)
from .zmod import (Subgroup, check_cap, has_ci_guarantee, mask_elements, mask_scale,
                   mask_translate, subgroups, units)

STABLE = "stable"
TRIVIAL = "trivially-unstable"
NONTRIVIAL = "nontrivially-unstable"


# ---------------------------------------------------------------------------
# permutation pairs


@dataclass(frozen=True)
class PermPair:
    """Two permutations of ``Z_n`` with ``alpha(u) ~ beta(v)`` for every edge ``uv``."""

    alpha: Permutation
    beta: Permutation

    def to_dict(self) -> dict:
        return {"alpha": list(self.alpha), "beta": list(self.beta)}


def verify_perm_pair(x: CirculantGraph, p: PermPair) -> bool:
    n = x.n
    if len(p.alpha) != n or len(p.beta) != n:
        raise ValueError("permutation degree does not match the graph")
    if not (autoeng.is_permutation(p.alpha) and autoeng.is_permutation(p.beta)):
        return False
    if p.alpha == p.beta:
        return False
    s = x.connection
    for u in range(n):
        au = p.alpha[u]
        for t in s.elements:
            if (p.beta[(u + t) % n] - au) % n not in s:
                return False
    return True


def _layer_swap(n: int) -> Permutation:
    return tuple(list(range(n, 2 * n)) + list(range(n)))


def in_product(g: Sequence[int], n: int) -> bool:
    """Whether a permutation of the double cover lies in ``Aut X x S_2``
    (assuming it is an automorphism)."""
    flip = g[0] >= n
    for v in range(n):
        a, b = g[v], g[v + n]
        if (a >= n) != flip:
            return False
        if b != (a - n if flip else a + n):
            return False
    return True


def perm_pair_to_cover(p: PermPair) -> Permutation:
    n = len(p.alpha)
    return tuple(list(p.alpha) + [b + n for b in p.beta])


def extract_perm_pair(x: CirculantGraph, g: Sequence[int]) -> PermPair | None:
    """Split a double-cover automorphism outside ``Aut X x S_2`` into a pair.

    Layer-swapping automorphisms are first composed with the translation by
    ``(0, 1)``.  Returns ``None`` for elements of the product.
    """
    n = x.n
    if not (is_connected(x) and not is_bipartite(x)):
        raise ValueError("the double cover is disconnected")
    g = tuple(g)
    if g[0] >= n:
        g = autoeng.compose(_layer_swap(n), g)
    if any(v >= n for v in g[:n]):
        raise ValueError("not an automorphism of the double cover")
    alpha = g[:n]
    beta = tuple(b - n for b in g[n:])
    if alpha == beta:
        return None
    pair = PermPair(alpha, beta)
    if not verify_perm_pair(x, pair):
        raise AssertionError("extracted pair fails verification")
    return pair


# ---------------------------------------------------------------------------
# Wilson's conditions


def _require_even(n: int) -> None:
    if n % 2:
        raise ValueError("order must be even")


def _subgroup_sum(mask: int, h: Subgroup) -> int:
    """``A + H``."""
    n = h.modulus
    out = mask
    for k in range(h.generator, n, h.generator):
        out |= mask_translate(mask, k, n)
    return out


def _even_odd(s: ConnectionSet) -> tuple[int, int]:
    e = s.mask & _even_mask(s.modulus)
    return e, s.mask & ~e


def _even_mask(n: int) -> int:
    return sum(1 << k for k in range(0, n, 2))


def check_c1(s: ConnectionSet) -> int | None:
    """Smallest nonzero even ``h`` with ``h + S_e = S_e``."""
    n = s.modulus
    _require_even(n)
    se, _ = _even_odd(s)
    for h in range(2, n, 2):
        if mask_translate(se, h, n) == se:
            return h
    return None


def check_c2(s: ConnectionSet) -> int | None:
    """Smallest odd ``h`` with ``2h + S_o = S_o`` and ``s + h in S`` whenever
    ``s = 0`` or ``-h (mod 4)``."""
    n = s.modulus
    if n % 4:
        raise ValueError("order must be divisible by 4")
    _, so = _even_odd(s)
    elems = s.elements
    for h in range(1, n, 2):
        if mask_translate(so, 2 * h, n) != so:
            continue
        if all((t + h) % n in s for t in elems if t % 4 == 0 or t % 4 == (-h) % 4):
            return h
    return None


@dataclass(frozen=True)
class C3Hit:
    subgroup: Subgroup
    residue: tuple[int, ...]
    d: int


def check_c3(s: ConnectionSet) -> C3Hit | None:
    n = s.modulus
    for h in subgroups(n):
        rmask = 0
        for t in s.elements:
            if _subgroup_sum(1 << t, h) & ~s.mask:
                rmask |= 1 << t
        if not rmask:
            continue
        r = mask_elements(rmask)
        d = n
        for t in r:
            d = math.gcd(d, t)
        if (n // d) % 2:
            continue
        if any((t // d) % 2 == 0 for t in r):
            continue
        inside_d = h.generator % d == 0
        inside_2d = h.generator % (2 * d) == 0
        if not inside_d or inside_2d:
            return C3Hit(h, tuple(r), d)
    return None


def check_c4(s: ConnectionSet) -> int | None:
    """Smallest unit ``m`` with ``n/2 + mS = S``."""
    n = s.modulus
    _require_even(n)
    for m in units(n):
        if mask_translate(mask_scale(s.mask, m, n), n // 2, n) == s.mask:
            return m
    return None


# ---------------------------------------------------------------------------
# generalized conditions


@dataclass(frozen=True)
class HKHit:
    variant: int
    H: Subgroup
    K: Subgroup


def odd_part_of_subgroup(k: Subgroup) -> int:
    """Mask of ``K_o = K \\ 2K`` (``|K|`` even)."""
    n = k.modulus
    return k.mask & ~Subgroup(n, 2 * k.generator).mask


def hk_variant_holds(s: ConnectionSet, variant: int, h: Subgroup, k: Subgroup) -> bool:
    n = s.modulus
    if h.order == 1 or k.order == 1 or k.order % 2:
        return False
    ko = odd_part_of_subgroup(k)
    if variant == 1:
        if h.mask & ko:
            return False
        return _subgroup_sum(s.mask, h) & ~(s.mask | _subgroup_sum(ko, h)) == 0
    if variant == 2:
        if not (h.order != 2 or k.order % 4 == 0):
            return False
        return _subgroup_sum(s.mask & ~ko, h) & ~(s.mask | ko) == 0
    raise ValueError("variant must be 1 or 2")


def hk_variant1_restated(s: ConnectionSet, h: Subgroup, k: Subgroup) -> bool:
    """Variant 1 using ``(S \\ (K_o + H)) + H <= S``."""
    ko = odd_part_of_subgroup(k)
    if h.mask & ko:
        return False
    koh = _subgroup_sum(ko, h)
    return _subgroup_sum(s.mask & ~koh, h) & ~s.mask == 0


def check_general_hk(s: ConnectionSet, variant: int | None = None) -> HKHit | None:
    """First ``(H, K)`` (ascending ``|H|`` then ``|K|``) satisfying variant 1
    or 2 of the generalized subgroup condition."""
    n = s.modulus
    if n % 2:
        return None
    variants = (1, 2) if variant is None else (variant,)
    groups = [g for g in subgroups(n) if g.order > 1]
    for h in groups:
        for k in groups:
            if k.order % 2:
                continue
            for v in variants:
                if hk_variant_holds(s, v, h, k):
                    return HKHit(v, h, k)
    return None


def witness_general_hk(s: ConnectionSet, variant: int, h: Subgroup, k: Subgroup) -> PermPair:
    n = s.modulus
    if not hk_variant_holds(s, variant, h, k):
        raise ValueError("the subgroups do not satisfy the condition")
    g = h.generator % n
    two_k = Subgroup(n, 2 * k.generator)
    ko = odd_part_of_subgroup(k)
    alpha = list(range(n))
    beta = list(range(n))
    if variant == 1 or g % two_k.generator == 0:
        # h in 2K reduces variant 2 to variant 1
        a_set = _subgroup_sum(two_k.mask, h)
        b_set = _subgroup_sum(ko, h)
        for x in range(n):
            if a_set >> x & 1:
                alpha[x] = (x + g) % n
            if b_set >> x & 1:
                beta[x] = (x + g) % n
    else:
        a_shift = mask_translate(two_k.mask, g, n)
        b_shift = mask_translate(ko, g, n)
        for x in range(n):
            if two_k.mask >> x & 1:
                alpha[x] = (x + g) % n
            elif a_shift >> x & 1:
                alpha[x] = (x - g) % n
            if ko >> x & 1:
                beta[x] = (x + g) % n
            elif b_shift >> x & 1:
                beta[x] = (x - g) % n
    pair = PermPair(tuple(alpha), tuple(beta))
    if not verify_perm_pair(CirculantGraph(s), pair):
        raise AssertionError("generalized subgroup witness fails verification")
    return pair


# ---------------------------------------------------------------------------
# isomorphism with the translate S + n/2


def spectrum(s: ConnectionSet) -> np.ndarray:
    """Eigenvalues ``sum_{s in S} zeta^{js}``, ``j = 0..n-1`` (real for symmetric S)."""
    n = s.modulus
    ind = np.zeros(n)
    ind[s.elements] = 1.0
    return np.fft.fft(ind).real


def spectra_differ(a: np.ndarray, b: np.ndarray, tol: float = 1e-7) -> bool:
    return bool(np.max(np.abs(np.sort(a) - np.sort(b)), initial=0.0) > tol)


@dataclass(frozen=True)
class IsoWitness:
    kind: str  # "multiplier" or "canonical"
    mapping: Permutation
    multiplier: int | None = None

    def perm_pair(self) -> PermPair:
        n = len(self.mapping)
        return PermPair(self.mapping, tuple((a + n // 2) % n for a in self.mapping))

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.multiplier is not None:
            out["m"] = self.multiplier
        out["mapping"] = list(self.mapping)
        return out


def _verify_iso(src: ConnectionSet, dst_mask: int, mapping) -> bool:
    n = src.modulus
    for u in range(n):
        for t in src.elements:
            if not dst_mask >> ((mapping[(u + t) % n] - mapping[u]) % n) & 1:
                return False
    return True


def check_iso_translate(s: ConnectionSet, force_slow: bool = False,
                        graph_report: autoeng.AutomorphismReport | None = None) -> IsoWitness | None:
    """An isomorphism ``Cay(Z_n, S) -> Cay(Z_n, S + n/2)``, if one exists."""
    n = s.modulus
    _require_even(n)
    t = mask_translate(s.mask, n // 2, n)
    if t & 1:
        return None  # S + n/2 would contain 0
    if not force_slow:
        for m in units(n):
            if mask_scale(s.mask, m, n) == t:
                w = IsoWitness("multiplier", tuple(m * x % n for x in range(n)), m)
                if not _verify_iso(s, t, w.mapping):
                    raise AssertionError("multiplier witness fails verification")
                return w
        if has_ci_guarantee(n):
            return None
    target = ConnectionSet(n, t)
    if spectra_differ(spectrum(s), spectrum(target)):
        return None
    x, y = CirculantGraph(s), CirculantGraph(target)
    ok, mapping = is_isomorphic(x.graph, y.graph, _circulant_seeds(s), _circulant_seeds(target))
    if not ok:
        return None
    if not _verify_iso(s, t, mapping):
        raise AssertionError("canonical witness fails verification")
    return IsoWitness("canonical", tuple(mapping))


# ---------------------------------------------------------------------------
# conditions on the even part


@dataclass
class XeCheck:
    ok: bool
    pair: PermPair | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def verify_xe_general(x: CirculantGraph, alpha: Mapping[int, int], beta: Mapping[int, int],
                      h: Subgroup) -> XeCheck:
    """Check the four hypotheses on permutations of ``2Z_n`` and, when they
    hold, extend ``alpha``/``beta`` by the identity on odd vertices."""
    n = x.n
    _require_even(n)
    evens = set(range(0, n, 2))
    for f in (alpha, beta):
        if set(f) != evens or set(f.values()) != evens:
            raise ValueError("permutations must be supported on 2Z_n")
    if h.generator % 2:
        raise ValueError("H must lie in 2Z_n")
    s = x.connection
    if all(alpha[v] == beta[v] for v in evens):
        return XeCheck(False, reason="alpha equals beta")
    se, so = _even_odd(s)
    for u in evens:
        for t in mask_elements(se):
            v = (u + t) % n
            if (beta[v] - alpha[u]) % n not in s:
                return XeCheck(False, reason=f"edge {u}-{v} not preserved")
    if _subgroup_sum(so, h) & ~s.mask:
        return XeCheck(False, reason="odd part not invariant under H")
    for f in (alpha, beta):
        if any((f[v] - v) % n not in h for v in evens):
            return XeCheck(False, reason="displacement outside H")
    a = tuple(alpha.get(v, v) for v in range(n))
    b = tuple(beta.get(v, v) for v in range(n))
    pair = PermPair(a, b)
    if not verify_perm_pair(x, pair):
        raise AssertionError("extended pair fails verification")
    return XeCheck(True, pair)


def check_xe_c4(s: ConnectionSet) -> int | None:
    n = s.modulus
    if n % 4:
        raise ValueError("order must be divisible by 4")
    se, so = _even_odd(s)
    if mask_translate(so, n // 2, n) != so:
        return None
    for m in units(n):
        if mask_translate(mask_scale(se, m, n), n // 2, n) != se:
            continue
        if _subgroup_sum(so, Subgroup(n, math.gcd(2 * (m - 1), n))) == so:
            return m
    return None


@dataclass(frozen=True)
class XeHit:
    alpha: Mapping[int, int]
    beta: Mapping[int, int]
    H: Subgroup
    source: str
    pair: PermPair

    def to_dict(self) -> dict:
        return {"condition": "xe-general", "H": str(self.H), "source": self.source}


def odd_stabilizer(s: ConnectionSet) -> Subgroup:
    """Largest subgroup ``H <= 2Z_n`` with ``S_o + H = S_o``."""
    n = s.modulus
    _, so = _even_odd(s)
    for d in sorted(d for d in range(2, n + 1, 2) if n % d == 0):
        if mask_translate(so, d, n) == so:
            return Subgroup(n, d)
    return Subgroup(n, n)


def _xe_candidates(x: CirculantGraph, hmax: Subgroup):
    n = x.n
    half = n // 2
    s = x.connection
    evens = range(0, n, 2)
    if half % 2 == 0:
        for m in units(n):
            yield ("multiplier", {v: m * v % n for v in evens}, {v: (m * v + half) % n for v in evens})
    xe = even_subgraph(x)
    cover = double_cover(xe)
    # layer- and H-coset-preserving automorphisms of the even double cover
    q = hmax.generator // 2
    colors = tuple((k % q) + (k >= half) * q for k in range(2 * half))
    colored = ColoredGraph(cover.adj, colors)
    seeds = [tuple(((k + q) % half) + (k >= half) * half for k in range(2 * half))]
    rep = analyze(colored, seeds=seeds, canonical=False)
    for g in rep.generators:
        a = {2 * k: 2 * g[k] for k in range(half)}
        b = {2 * k: 2 * (g[k + half] - half) for k in range(half)}
        if a != b:
            yield ("even-cover", a, b)


def search_xe_general(x: CirculantGraph) -> XeHit | None:
    """Find permutations of ``2Z_n`` and ``H`` satisfying the even-part
    condition, or ``None``."""
    n = x.n
    _require_even(n)
    hmax = odd_stabilizer(x.connection)
    if hmax.order == 1:
        return None
    allowed = [h for h in subgroups(n) if h.generator % 2 == 0 and h.is_subgroup_of(hmax)]
    for source, a, b in _xe_candidates(x, hmax):
        for h in allowed:
            res = verify_xe_general(x, a, b, h)
            if res:
                return XeHit(a, b, h, source, res.pair)
    return None


# ---------------------------------------------------------------------------
# verdicts


def _circulant_seeds(s: ConnectionSet) -> list[Permutation]:
    n = s.modulus
    if n == 1:
        return []
    seeds = [tuple((v + 1) % n for v in range(n)), tuple((-v) % n for v in range(n))]
    for m in units(n):
        if m not in (1, n - 1) and mask_scale(s.mask, m, n) == s.mask:
            seeds.append(tuple(m * v % n for v in range(n)))
    return seeds


def _cover_seeds(n: int, x_gens) -> list[Permutation]:
    rot = tuple([(v + 1) % n for v in range(n)] + [n + (v + 1) % n for v in range(n)])
    seeds = [rot, _layer_swap(n)]
    for g in x_gens:
        seeds.append(tuple(list(g) + [n + a for a in g]))
    return seeds


@dataclass
class StabilityReport:
    connection: ConnectionSet
    verdict: str
    triviality_reasons: list[str]
    aut_x: int
    aut_bx: int
    wilson_types: list[dict] = field(default_factory=list)
    new_conditions: list[dict] = field(default_factory=list)
    witnesses: list[dict] = field(default_factory=list)
    certificate: bytes | None = None

    @property
    def unstable(self) -> bool:
        return self.verdict != STABLE

    @property
    def unexplained(self) -> bool:
        return self.verdict == NONTRIVIAL and not self.wilson_types and not self.new_conditions

    def condition_names(self) -> set[str]:
        names = {w["type"] for w in self.wilson_types}
        names |= {c["condition"] for c in self.new_conditions}
        return names

    def to_dict(self) -> dict:
        return {
            "graph": self.connection.literal(),
            "verdict": self.verdict,
            "trivialityReasons": list(self.triviality_reasons),
            "autX": str(self.aut_x),
            "autBX": str(self.aut_bx),
            "wilsonTypes": self.wilson_types,
            "newConditions": self.new_conditions,
            "witnesses": self.witnesses,
            "unexplained": self.unexplained,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> StabilityReport:
        return cls(ConnectionSet.parse(d["graph"]), d["verdict"], list(d["trivialityReasons"]),
                   int(d["autX"]), int(d["autBX"]), list(d["wilsonTypes"]),
                   list(d["newConditions"]), list(d["witnesses"]))


def triviality_reasons(x: CirculantGraph) -> list[str]:
    if x.n == 1:
        return []
    out = []
    if not is_connected(x):
        out.append("disconnected")
    if is_bipartite(x):
        out.append("bipartite")
    if twin_translation(x) is not None:
        out.append("has-twins")
    return out


@dataclass
class GroupData:
    aut_x: autoeng.AutomorphismReport
    aut_bx: autoeng.AutomorphismReport


def automorphism_data(x: CirculantGraph, canonical: bool = False) -> GroupData:
    s = x.connection
    rx = analyze(x.graph, seeds=_circulant_seeds(s), canonical=canonical, trusted_seeds=True)
    rbx = analyze(double_cover(x), seeds=_cover_seeds(x.n, rx.generators), canonical=False,
                  trusted_seeds=True)
    return GroupData(rx, rbx)


def cover_is_unstable(x: CirculantGraph) -> bool:
    """Instability without computing ``Aut X``.

    The double cover is searched with product-type seeds only.  Since
    ``Aut X x S_2`` always sits inside ``Aut BX``, the graph is stable
    exactly when every generator of ``Aut BX`` lies in that product.
    """
    n = x.n
    rbx = analyze(double_cover(x), seeds=_cover_seeds(n, _circulant_seeds(x.connection)[1:]),
                  canonical=False, trusted_seeds=True)
    return not all(in_product(g, n) for g in rbx.generators)


def annotate_conditions(s: ConnectionSet, report: StabilityReport | None = None,
                        x_report: autoeng.AutomorphismReport | None = None) -> tuple[list, list, list]:
    """Run every criterion on ``S``; returns (wilson types, new conditions, witnesses)."""
    n = s.modulus
    wilson, new, wits = [], [], []
    if n % 2:
        return wilson, new, wits
    x = CirculantGraph(s)
    se, so = _even_odd(s)
    h1 = check_c1(s)
    if h1 is not None:
        wilson.append({"type": "C1", "h": h1, "vacuous": se == 0})
    if n % 4 == 0:
        h2 = check_c2(s)
        if h2 is not None:
            wilson.append({"type": "C2", "h": h2, "vacuous": so == 0})
    c3 = check_c3(s)
    if c3 is not None:
        wilson.append({"type": "C3", "H": str(c3.subgroup), "R": list(c3.residue), "d": c3.d})
    m4 = check_c4(s)
    if m4 is not None:
        wilson.append({"type": "C4", "m": m4})
        p = PermPair(tuple(m4 * v % n for v in range(n)), tuple((m4 * v + n // 2) % n for v in range(n)))
        if not verify_perm_pair(x, p):
            raise AssertionError("C4 witness fails verification")
        wits.append({"source": "C4", **p.to_dict()})
    hk = check_general_hk(s)
    if hk is not None:
        new.append({"condition": "generalized-HK", "variant": hk.variant, "H": str(hk.H), "K": str(hk.K)})
        wits.append({"source": "generalized-HK", **witness_general_hk(s, hk.variant, hk.H, hk.K).to_dict()})
    iso = check_iso_translate(s, graph_report=x_report)
    if iso is not None:
        entry = {"condition": "iso-translate", "kind": iso.kind}
        if iso.multiplier is not None:
            entry["m"] = iso.multiplier
        new.append(entry)
        p = iso.perm_pair()
        if not verify_perm_pair(x, p):
            raise AssertionError("iso-translate witness fails verification")
        wits.append({"source": "iso-translate", **p.to_dict()})
    if n % 4 == 0:
        mx = check_xe_c4(s)
        if mx is not None:
            new.append({"condition": "xe-c4", "m": mx})
    xe = search_xe_general(x)
    if xe is not None:
        new.append(xe.to_dict())
        wits.append({"source": "xe-general", **xe.pair.to_dict()})
    return wilson, new, wits


def stability_verdict(x: CirculantGraph, conditions: bool = True, canonical: bool = False) -> StabilityReport:
    check_cap(x.n)
    s = x.connection
    reasons = triviality_reasons(x)
    data = automorphism_data(x, canonical=canonical)
    ax, abx = data.aut_x.group_order, data.aut_bx.group_order
    if abx < 2 * ax:
        raise AssertionError("Aut X x S_2 must embed in Aut BX")
    unstable = abx != 2 * ax
    if not unstable:
        verdict = STABLE
    elif reasons:
        verdict = TRIVIAL
    else:
        verdict = NONTRIVIAL
    report = StabilityReport(s, verdict, reasons, ax, abx, certificate=data.aut_x.canonical_certificate)
    if unstable:
        n = x.n
        for g in data.aut_bx.generators:
            if in_product(g, n):
                continue
            if verdict == NONTRIVIAL:
                pair = extract_perm_pair(x, g)
                if pair is not None:
                    report.witnesses.append({"source": "automorphism", **pair.to_dict()})
                    break
            else:
                report.witnesses.append({"source": "bx-automorphism", "permutation": list(g)})
                break
    if conditions:
        w, c, wits = annotate_conditions(s, report, data.aut_x)
        report.wilson_types, report.new_conditions = w, c
        report.witnesses.extend(wits)
    return report
