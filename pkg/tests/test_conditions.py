import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from circstab.autoeng import compose
from circstab.circulant import CirculantGraph, ConnectionSet, double_cover, symmetric_masks
from circstab.conditions import (NONTRIVIAL, STABLE, TRIVIAL, PermPair, StabilityReport,
                                 automorphism_data, check_c1, check_c2, check_c3, check_c4,
                                 check_general_hk, check_iso_translate, check_xe_c4,
                                 cover_is_unstable, extract_perm_pair, hk_variant1_restated,
                                 hk_variant_holds, in_product, perm_pair_to_cover, search_xe_general,
                                 spectrum, stability_verdict, verify_perm_pair, verify_xe_general,
                                 witness_general_hk)
from circstab.fixtures import (iso_translate_connection, order24_exceptions, val8_connection)
from circstab.zmod import Subgroup, subgroups


def S(text):
    return ConnectionSet.parse(text)


def X(text):
    return CirculantGraph.parse(text)


Z16 = ConnectionSet.of(16, list(range(1, 16, 2)) + [2, 14])


def complete(n):
    return ConnectionSet.of(n, range(1, n))


# --- verdicts ---------------------------------------------------------------

def test_verdict_examples():
    r = stability_verdict(X("10:1,2,8,9"))
    assert r.verdict == NONTRIVIAL and r.aut_bx > 2 * r.aut_x
    assert stability_verdict(X("5:1,2,3,4")).verdict == STABLE
    r = stability_verdict(X("6:1,5"))
    assert r.verdict == TRIVIAL and r.triviality_reasons == ["bipartite"]
    assert stability_verdict(X("1:")).verdict == STABLE


def test_unstable_report_has_checked_witness():
    x = X("10:1,2,8,9")
    r = stability_verdict(x)
    pairs = [PermPair(tuple(w["alpha"]), tuple(w["beta"])) for w in r.witnesses if "alpha" in w]
    assert pairs and all(verify_perm_pair(x, p) for p in pairs)
    assert r.witnesses[0]["source"] == "automorphism"


def test_trivial_witness_is_cover_automorphism():
    x = X("8:2,6")
    r = stability_verdict(x)
    w = r.witnesses[0]
    assert w["source"] == "bx-automorphism"
    g = w["permutation"]
    assert double_cover(x).is_automorphism(g) and not in_product(g, 8)


@pytest.mark.parametrize("n", range(2, 15))
def test_cover_fast_path_matches_order_test(n):
    for mask in symmetric_masks(n):
        x = CirculantGraph(ConnectionSet(n, mask))
        assert cover_is_unstable(x) == (stability_verdict(x, conditions=False).verdict != STABLE)


# --- permutation pairs ------------------------------------------------------

def test_verify_perm_pair_examples():
    x = X("10:1,2,8,9")
    p = PermPair(tuple(3 * v % 10 for v in range(10)), tuple((3 * v + 5) % 10 for v in range(10)))
    assert verify_perm_pair(x, p)
    ident = tuple(range(10))
    assert not verify_perm_pair(x, PermPair(ident, ident))
    c5 = X("5:1,4")
    assert not verify_perm_pair(c5, PermPair(tuple(range(5)), tuple((v + 1) % 5 for v in range(5))))
    with pytest.raises(ValueError):
        verify_perm_pair(c5, PermPair((0, 1), (1, 0)))


def test_extract_perm_pair_examples():
    x = X("10:1,2,8,9")
    assert extract_perm_pair(x, tuple(range(20))) is None
    data = automorphism_data(x)
    outside = [g for g in data.aut_bx.generators if not in_product(g, 10)]
    assert outside
    pair = extract_perm_pair(x, outside[0])
    assert pair is not None and verify_perm_pair(x, pair)
    # a layer-swapping automorphism outside the product
    swap = tuple(list(range(10, 20)) + list(range(10)))
    g = compose(swap, perm_pair_to_cover(pair))
    assert g[0] >= 10 and double_cover(x).is_automorphism(g)
    p2 = extract_perm_pair(x, g)
    assert p2 == pair
    with pytest.raises(ValueError):
        extract_perm_pair(X("6:1,5"), tuple(range(12)))


# --- Wilson conditions ------------------------------------------------------

def test_c1_examples():
    assert check_c1(S("8:1,2,6,7")) == 4
    assert check_c1(S("10:1,2,8,9")) is None
    assert check_c1(S("8:1,3,5,7")) == 2  # empty even part
    with pytest.raises(ValueError):
        check_c1(S("5:1,4"))


def c2_oracle(s):
    n = s.modulus
    elems = set(s.elements)
    odd = {t for t in elems if t % 2}
    for h in range(1, n, 2):
        if {(t + 2 * h) % n for t in odd} != odd:
            continue
        if all((t + h) % n in elems for t in elems if t % 4 in (0, (-h) % 4)):
            return h
    return None


def test_c2_examples():
    for n in (4, 8, 12, 16):
        assert check_c2(complete(n)) is None
    assert check_c2(Z16) == c2_oracle(Z16) is None
    assert check_c2(S("4:2")) == 1  # empty odd part, (b) vacuous
    assert check_c2(S("8:2,4,6")) is None
    with pytest.raises(ValueError):
        check_c2(S("10:1,9"))


def c3_oracle(s):
    n = s.modulus
    elems = set(s.elements)
    for h in sorted(subgroups(n), key=lambda g: g.order):
        hs = h.elements()
        r = [t for t in sorted(elems) if any((t + y) % n not in elems for y in hs)]
        if not r:
            continue
        d = math.gcd(n, *r)
        in_d = all(y % d == 0 for y in hs)
        in_2d = all(y % (2 * d) == 0 for y in hs)
        if (n // d) % 2 == 0 and all((t // d) % 2 for t in r) and (not in_d or in_2d):
            return h.generator, tuple(r), d
    return None


def test_c3_examples():
    for n in range(4, 13, 2):
        assert check_c3(complete(n)) is None
    s = S("12:1,2,10,11")
    hit = check_c3(s)
    assert (None if hit is None else (hit.subgroup.generator, hit.residue, hit.d)) == c3_oracle(s)


@pytest.mark.parametrize("n", range(2, 17, 2))
def test_c3_matches_oracle(n):
    for mask in symmetric_masks(n):
        s = ConnectionSet(n, mask)
        hit = check_c3(s)
        assert (None if hit is None else (hit.subgroup.generator, hit.residue, hit.d)) == c3_oracle(s)
        assert check_c2(s) == c2_oracle(s) if n % 4 == 0 else True


def test_c4_examples():
    assert check_c4(S("10:1,2,8,9")) == 3
    assert check_c4(S("8:1,2,6,7")) == 3
    assert check_c4(S("8:1,3,5,7")) == 1


# --- generalized subgroup condition -----------------------------------------

def test_general_hk_c1_embedding():
    s = S("8:1,2,6,7")
    h, k = Subgroup(8, 4), Subgroup(8, 1)
    assert hk_variant_holds(s, 2, h, k)
    assert verify_perm_pair(CirculantGraph(s), witness_general_hk(s, 2, h, k))
    assert check_general_hk(s, variant=2) is not None


def test_general_hk_val8_has_no_hit():
    assert check_general_hk(val8_connection(4)) is None


def test_general_hk_order24_exceptions_hit_variant2():
    # these six lack a Wilson type, yet the subgroup condition explains them
    for s in order24_exceptions():
        hit = check_general_hk(s)
        assert hit is not None and hit.variant == 2
        assert verify_perm_pair(CirculantGraph(s), witness_general_hk(s, hit.variant, hit.H, hit.K))


def test_general_hk_rejects_bad_input():
    with pytest.raises(ValueError):
        witness_general_hk(S("10:1,2,8,9"), 1, Subgroup(10, 5), Subgroup(10, 1))


@pytest.mark.parametrize("n", range(4, 21, 2))
def test_general_hk_witnesses_and_restatement(n):
    groups = [g for g in subgroups(n) if g.order > 1]
    for mask in list(symmetric_masks(n))[::3]:
        s = ConnectionSet(n, mask)
        x = CirculantGraph(s)
        for h in groups:
            for k in groups:
                if k.order % 2:
                    continue
                assert hk_variant_holds(s, 1, h, k) == hk_variant1_restated(s, h, k)
                for v in (1, 2):
                    if hk_variant_holds(s, v, h, k):
                        p = witness_general_hk(s, v, h, k)
                        assert verify_perm_pair(x, p)
                        if v == 2:
                            assert p.alpha[0] == h.generator


# --- iso-translate -----------------------------------------------------------

def test_iso_translate_examples():
    w = check_iso_translate(S("10:1,2,8,9"))
    assert w.kind == "multiplier" and w.multiplier == 3
    assert check_iso_translate(val8_connection(4)) is not None
    for c in (2, 3):
        assert check_iso_translate(iso_translate_connection(5, 10, c)) is not None
    assert check_iso_translate(S("10:1,5,9")) is None  # n/2 in S


def test_iso_translate_slow_path_agrees():
    s = S("10:1,2,8,9")
    w = check_iso_translate(s, force_slow=True)
    assert w.kind == "canonical"
    assert verify_perm_pair(CirculantGraph(s), w.perm_pair())


def test_spectrum_matches_adjacency():
    for text in ("10:1,2,8,9", "12:1,3,4,8,9,11", "9:1,8"):
        s = S(text)
        n = s.modulus
        a = np.zeros((n, n))
        for u in range(n):
            for t in s.elements:
                a[u, (u + t) % n] = 1
        assert np.allclose(np.sort(spectrum(s)), np.linalg.eigvalsh(a))
        if n % 2 == 0 and not s.translate(n // 2) & 1:
            shifted = ConnectionSet(n, s.translate(n // 2))
            signs = np.array([(-1) ** j for j in range(n)])
            assert np.allclose(spectrum(shifted), signs * spectrum(s))


# --- even-part conditions ---------------------------------------------------

def _on_evens(n, f):
    return {v: f(v) % n for v in range(0, n, 2)}


def test_verify_xe_examples():
    x = CirculantGraph(Z16)
    a = _on_evens(16, lambda v: 3 * v)
    b = _on_evens(16, lambda v: 3 * v + 8)
    res = verify_xe_general(x, a, b, Subgroup(16, 4))
    assert res and verify_perm_pair(x, res.pair)
    assert all(res.pair.alpha[v] == v for v in range(1, 16, 2))
    assert not verify_xe_general(x, a, a, Subgroup(16, 4))
    assert not verify_xe_general(x, a, b, Subgroup(16, 16))
    with pytest.raises(ValueError):
        verify_xe_general(x, {0: 0}, {0: 0}, Subgroup(16, 4))


def test_check_xe_c4_examples():
    assert check_xe_c4(Z16) == 3
    assert check_xe_c4(S("8:1,2,6,7")) is None
    assert check_xe_c4(S("8:1,2,4,6,7")) is None  # odd part not invariant under +4
    with pytest.raises(ValueError):
        check_xe_c4(S("10:1,9"))


def test_search_xe_examples():
    hit = search_xe_general(CirculantGraph(Z16))
    assert hit is not None and hit.source == "multiplier"
    assert verify_perm_pair(CirculantGraph(Z16), hit.pair)
    # odd part with trivial stabilizer: nothing to search
    assert search_xe_general(X("10:1,2,8,9")) is None


# --- serialization ------------------------------------------------------------

@pytest.mark.parametrize("text", ["10:1,2,8,9", "6:1,5", "5:1,2,3,4", "24:2,3,8,9,10,14,15,16,21,22"])
def test_report_json_round_trip(text):
    r = stability_verdict(X(text))
    raw = r.to_json()
    d = json.loads(raw)
    for key in ("verdict", "trivialityReasons", "autX", "autBX", "wilsonTypes", "newConditions", "witnesses"):
        assert key in d
    assert isinstance(d["autX"], str) and isinstance(d["autBX"], str)
    assert StabilityReport.from_dict(d).to_json() == raw


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([8, 12, 16, 18, 20]).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(1, n // 2), max_size=n // 2))))
def test_hits_imply_instability(args):
    n, vals = args
    r = stability_verdict(CirculantGraph(ConnectionSet.symmetric_closure(n, vals)))
    if r.wilson_types or r.new_conditions:
        assert r.verdict != STABLE
    if r.verdict == NONTRIVIAL:
        assert not r.triviality_reasons and r.aut_bx > 2 * r.aut_x
