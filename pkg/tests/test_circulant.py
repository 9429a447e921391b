import pytest
from hypothesis import given, strategies as st

from circstab.autoeng import analyze, is_isomorphic
from circstab.circulant import (CirculantGraph, ConnectionSet, ParseError, aux_2sprime_graph,
                                circulant_from_literal, double_cover, even_subgraph,
                                is_bipartite, is_connected, is_connected_bfs, is_connected_gcd,
                                is_twin_free, is_twin_free_bruteforce, sprime_mask, symmetric_masks,
                                twin_translation)
from circstab.autoeng import cycle_graph
from circstab.zmod import CapExceeded, mask_elements, units


def X(text):
    return CirculantGraph.parse(text)


def test_connected_examples():
    assert not is_connected(X("8:2,6"))
    assert is_connected(X("5:1,4"))
    assert is_connected(X("10:1,2,8,9"))


def test_bipartite_examples():
    assert is_bipartite(X("6:1,5"))
    assert not is_bipartite(X("5:1,4"))
    assert not is_bipartite(X("10:1,2,8,9"))


def test_twin_examples():
    assert twin_translation(X("4:1,3")) == 2
    assert is_twin_free(X("10:1,2,8,9"))
    assert is_twin_free(X("8:1,2,6,7"))


def test_double_cover_examples():
    assert is_isomorphic(double_cover(X("3:1,2")), cycle_graph(6))[0]
    b = double_cover(X("10:1,2,8,9"))
    assert b.order == 20 and b.edge_count() == 40


def test_sprime_examples():
    x = X("10:1,2,8,9")
    assert sprime_mask(x.connection) == x.mask
    aux = aux_2sprime_graph(x)
    assert mask_elements(aux.connection_mask) == [2, 4, 6, 8] and not aux.loops
    y = X("8:1,2,6,7")
    assert mask_elements(sprime_mask(y.connection)) == [1, 7]
    assert mask_elements(aux_2sprime_graph(y).connection_mask) == [2, 6]
    z = X("8:1,3,4,5,7")
    assert sprime_mask(z.connection) == 1 << 4  # only n/2 survives; 2*4 = 0
    az = aux_2sprime_graph(z)
    assert az.loops and az.graph.edge_count() == 0 and az.graph.loop_colors
    assert aux_2sprime_graph(X("8:1,7")).graph.edge_count() == 16
    assert aux_2sprime_graph(X("8:2,6")).graph.edge_count() == 0
    with pytest.raises(ValueError):
        aux_2sprime_graph(X("5:1,4"))


def test_even_subgraph_examples():
    assert even_subgraph(X("10:1,2,8,9")).connection.literal() == "5:1,4"
    assert even_subgraph(X("10:1,9")).connection.literal() == "5:"
    odds = ",".join(str(s) for s in sorted(set(range(1, 16, 2)) | {2, 14}))
    assert even_subgraph(X(f"16:{odds}")).connection.literal() == "8:1,7"
    with pytest.raises(ValueError):
        even_subgraph(X("7:1,6"))


@pytest.mark.parametrize("text", ["10:1,2,8", "10:0,5", "10:2,1,8,9", "10:1,1,9", "10:1,11",
                                  "ten:1", "10:1,,9", "10;1,9"])
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        ConnectionSet.parse(text)


def test_parse_accepts_edge_cases():
    assert ConnectionSet.parse("1:").modulus == 1
    assert ConnectionSet.parse("2:1").elements == [1]
    assert ConnectionSet.parse(" 10 : 1, 2, 8, 9 ").literal() == "10:1,2,8,9"


def test_literal_cap(monkeypatch):
    monkeypatch.setenv("CIRC_CAP", "9")
    with pytest.raises(CapExceeded):
        circulant_from_literal("10:1,9")


def test_connection_set_invariants():
    with pytest.raises(ValueError):
        ConnectionSet.of(6, [0, 1, 5])
    with pytest.raises(ValueError):
        ConnectionSet.of(6, [1])


def test_empty_set_predicates():
    x = X("6:")
    assert not is_connected(x) and is_bipartite(x) and not is_twin_free(x)
    assert is_connected(X("1:"))


@pytest.mark.parametrize("n", range(1, 17))
def test_predicates_agree_with_brute_force(n):
    for mask in symmetric_masks(n):
        x = CirculantGraph(ConnectionSet(n, mask))
        assert is_connected_gcd(x) == is_connected_bfs(x)
        assert is_twin_free(x) == is_twin_free_bruteforce(x)
        if is_connected(x) and n % 2 == 0:
            assert is_bipartite(x) == all(s % 2 for s in x.connection)
        if is_connected(x) and n > 1:
            bx = double_cover(x)
            comps = _components(bx.adj)
            assert is_bipartite(x) == (comps == 2)


def _components(adj):
    n, seen, count = len(adj), 0, 0
    for v in range(n):
        if seen >> v & 1:
            continue
        count += 1
        comp = frontier = 1 << v
        while frontier:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= adj[low.bit_length() - 1]
                f ^= low
            frontier = nxt & ~comp
            comp |= nxt
        seen |= comp
    return count


sets = st.integers(2, 20).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.integers(1, n - 1), max_size=n), st.sampled_from(units(n))))


@given(sets)
def test_cover_commutes_with_multipliers(args):
    n, vals, m = args
    s = ConnectionSet.symmetric_closure(n, vals)
    b1 = double_cover(CirculantGraph(s))
    b2 = double_cover(CirculantGraph(s.scale(m)))
    relabel = [m * v % n for v in range(n)] + [n + m * v % n for v in range(n)]
    assert b1.relabel(relabel) == b2


def test_str():
    assert str(X("5:1,4")) == "Cay(Z_5, {1,4})"
