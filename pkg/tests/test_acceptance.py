"""Acceptance criteria, one test each; expected values are pinned here."""

import os
import random

import pytest

from circstab.autoeng import ColoredGraph, analyze, brute_force_aut_order
from circstab.census import candidate_masks, match_order24, run_census
from circstab.circulant import (CirculantGraph, ConnectionSet, aux_2sprime_graph, double_cover,
                                symmetric_masks)
from circstab.conditions import (NONTRIVIAL, STABLE, TRIVIAL, PermPair, automorphism_data, check_c1, check_c4, check_general_hk,
                                 check_iso_translate, stability_verdict, verify_perm_pair)
from circstab.fixtures import iso_translate_connection, val8_connection
from circstab.twoprime import classify_2p, orders_predicate
from circstab.zmod import mask_scale, units

EXPECTED_TOTAL_TO_38 = 3576
EXPECTED_ORDER24_NO_WILSON = 6
EXPECTED_EXTENDED_NO_WILSON = {40: 52, 48: 262, 50: 2}
EXPECTED_EXTENDED_TOTAL = 67725


def all_sets(n):
    return [ConnectionSet(n, m) for m in symmetric_masks(n)]


def orbit_reps(n):
    seen, out = set(), []
    for s in all_sets(n):
        if s.mask not in seen:
            seen.update(mask_scale(s.mask, m, n) for m in units(n))
            out.append(s)
    return out


def test_c01_census_total(criterion, census_cache):
    total = run_census(1, 38, 1, census_cache).total
    assert criterion(1, "nontrivially unstable circulants, n <= 38", total, EXPECTED_TOTAL_TO_38,
                     total == EXPECTED_TOTAL_TO_38)


def test_c02_order24_exceptions(criterion, census_cache):
    summary = run_census(24, 24, 1, census_cache)
    count = len(summary.orders[24].no_wilson())
    matched = match_order24(summary)
    ok = count == EXPECTED_ORDER24_NO_WILSON and all(matched)
    assert criterion(2, "order-24 classes without a Wilson type", f"{count} ({sum(matched)} matched)",
                     "6 (6 matched)", ok)


@pytest.mark.skipif(not os.environ.get("CIRCSTAB_EXTENDED"), reason="extended profile is opt-in")
def test_c03_extended_counts(criterion, census_cache):
    summary = run_census(39, 50, 1, census_cache)
    got = {n: len(summary.orders[n].no_wilson()) for n in EXPECTED_EXTENDED_NO_WILSON}
    # reference comparison only: recorded, never asserted
    criterion(3, "extended no-Wilson counts (reference)", f"{got} total={summary.total}",
              f"{EXPECTED_EXTENDED_NO_WILSON} total={EXPECTED_EXTENDED_TOTAL}",
              got == EXPECTED_EXTENDED_NO_WILSON)


def test_c04_odd_orders(criterion):
    bad = [s.literal() for n in range(1, 16, 2) for s in all_sets(n)
           if stability_verdict(CirculantGraph(s), conditions=False).verdict == NONTRIVIAL]
    assert criterion(4, "odd orders <= 15", len(bad), 0, not bad)


def test_c05_orders_pattern(criterion, census_cache):
    summary = run_census(1, 22, 1, census_cache)
    bad = [n for n in range(1, 23)
           if orders_predicate(n) != (summary.orders[n].nontrivially_unstable == 0)]
    assert criterion(5, "order predicate vs census, n <= 22", bad, [], not bad)


def test_c06_two_prime(criterion):
    bad = []
    for n in (10, 22, 26):
        for mask in candidate_masks(n):
            s = ConnectionSet(n, mask)
            unstable = stability_verdict(CirculantGraph(s), conditions=False).verdict == NONTRIVIAL
            if unstable != (classify_2p(s) is not None) or (unstable and check_c4(s) is None):
                bad.append(s.literal())
    assert criterion(6, "order-2p classification at 10, 22, 26", len(bad), 0, not bad)


def test_c07_oracle_equivalence(criterion):
    graphs = []
    for n in range(1, 13):
        for s in all_sets(n):
            x = CirculantGraph(s)
            graphs.append(x.graph)
            if 2 * n <= 12:
                graphs.append(double_cover(x))
    rng = random.Random(2024)
    for _ in range(200):
        edges = [(u, v) for u in range(10) for v in range(u + 1, 10) if rng.random() < rng.uniform(0.2, 0.8)]
        graphs.append(ColoredGraph.from_edges(10, edges, [rng.randrange(3) for _ in range(10)]))
    bad = sum(analyze(g, canonical=False).group_order != brute_force_aut_order(g) for g in graphs)
    assert criterion(7, f"engine vs brute force on {len(graphs)} graphs", bad, 0, bad == 0)


@pytest.mark.parametrize("name", ["val8", "iso-translate"])
def test_c08_fixtures(criterion, name):
    s = val8_connection(4) if name == "val8" else iso_translate_connection(5, 10, 2)
    r = stability_verdict(CirculantGraph(s))
    iso = check_iso_translate(s)
    ok = (not r.triviality_reasons and r.aut_bx != 2 * r.aut_x and iso is not None
          and not r.wilson_types and r.verdict == NONTRIVIAL)
    measured = f"{r.verdict}, iso={iso is not None}, wilson={len(r.wilson_types)}"
    criterion(8, "family fixture " + name, measured, "nontrivially-unstable, iso=True, wilson=0", ok)
    assert ok


@pytest.fixture(scope="module")
def even_reports():
    out = []
    for n in range(2, 25, 2):
        for s in orbit_reps(n):
            out.append((s, stability_verdict(CirculantGraph(s))))
    return out


def test_c09_soundness(criterion, even_reports):
    hits_on_stable = bad_witness = 0
    for s, r in even_reports:
        x = CirculantGraph(s)
        if r.verdict == STABLE and (r.wilson_types or r.new_conditions):
            hits_on_stable += 1
        for w in r.witnesses:
            if "alpha" in w:
                bad_witness += not verify_perm_pair(x, PermPair(tuple(w["alpha"]), tuple(w["beta"])))
            else:
                bad_witness += not double_cover(x).is_automorphism(w["permutation"])
    assert criterion(9, f"condition soundness over {len(even_reports)} graphs",
                     f"{hits_on_stable}/{bad_witness}", "0/0", hits_on_stable == bad_witness == 0)


def test_c10_cross_implications(criterion, even_reports):
    special = notdiv4 = 0
    for s, r in even_reports:
        v2 = check_general_hk(s, variant=2)
        if {w["type"] for w in r.wilson_types} & {"C1", "C2", "C3"} and v2 is None:
            special += 1
        if s.modulus % 4 == 2 and v2 is not None and check_c1(s) is None:
            notdiv4 += 1
    assert criterion(10, "C1-C3 give variant 2; n = 2 mod 4 gives C1", f"{special}/{notdiv4}", "0/0",
                     special == notdiv4 == 0)


def test_c11_invariants(criterion):
    ms_bad = aux_bad = 0
    for n in range(1, 17):
        for s in all_sets(n):
            x = CirculantGraph(s)
            data = automorphism_data(x)
            for m in units(n):
                y = CirculantGraph(s.scale(m)).graph if n > 1 else x.graph
                ms_bad += sum(not y.is_automorphism(g) for g in data.aut_x.generators)
            if n % 2 == 0:
                aux = aux_2sprime_graph(x).graph
                aux_bad += sum(not aux.is_automorphism(g) for g in data.aut_bx.generators)
    rng = random.Random(99)
    tests = [CirculantGraph.parse(t).graph for t in ("10:1,2,8,9", "8:1,2,6,7", "12:1,3,4,8,9,11")]
    tests += [double_cover(CirculantGraph.parse("10:1,2,8,9")), CirculantGraph(val8_connection(4)).graph]
    cert_bad = 0
    for g in tests:
        ref = analyze(g).canonical_certificate
        for _ in range(1000):
            perm = list(range(g.order))
            rng.shuffle(perm)
            cert_bad += analyze(g.relabel(perm)).canonical_certificate != ref
    assert criterion(11, "multiplier / 2S' / certificate invariants", f"{ms_bad}/{aux_bad}/{cert_bad}",
                     "0/0/0", ms_bad == aux_bad == cert_bad == 0)


def test_c12_stability_sanity(criterion):
    bad = [f"K{n}" for n in range(3, 11)
           if stability_verdict(CirculantGraph(ConnectionSet.of(n, range(1, n))), conditions=False).verdict != STABLE]
    for n in range(2, 13):
        for s in all_sets(n):
            r = stability_verdict(CirculantGraph(s), conditions=False)
            if r.triviality_reasons and r.verdict != TRIVIAL:
                bad.append(s.literal())
    assert criterion(12, "complete graphs stable, trivial inputs unstable", len(bad), 0, not bad)
