"""Automorphism groups and canonical forms of vertex-colored graphs.

The engine is a plain individualization-refinement search:

* partitions are refined to the coarsest equitable refinement by counting
  neighbours in splitter cells,
* the target cell is the first smallest non-singleton cell and its members
  are individualized in increasing vertex order,
* automorphisms found along the way prune sibling branches through orbits of
  the pointwise stabilizer of the current prefix.

The group order is the product of the orbit sizes of the first path, so it is
exact regardless of how many generators happen to be found.  Callers may pass
known automorphisms as ``seeds``; they only enlarge the orbits used for
pruning and are checked before use unless the caller vouches for them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Permutation = tuple[int, ...]

DEFAULT_VERTEX_CAP = 128


class VertexCapExceeded(ValueError):
    pass


# ---------------------------------------------------------------------------
# permutations


def identity(n: int) -> Permutation:
    return tuple(range(n))


def compose(a: Sequence[int], b: Sequence[int]) -> Permutation:
    """``a`` after ``b``: ``x -> a[b[x]]``."""
    return tuple(a[x] for x in b)


def inverse(p: Sequence[int]) -> Permutation:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def is_permutation(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(len(p)))


def is_identity(p: Sequence[int]) -> bool:
    return all(i == x for i, x in enumerate(p))


# ---------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class ColoredGraph:
    """Simple graph on ``0..n-1`` with adjacency rows as bitmasks.

    ``loop_colors`` lists colors whose vertices carry a loop; loops never
    appear in ``adj``.
    """

    adj: tuple[int, ...]
    colors: tuple[int, ...]
    loop_colors: frozenset = frozenset()

    def __post_init__(self):
        n = len(self.adj)
        if len(self.colors) != n:
            raise ValueError("one color per vertex required")
        for v, row in enumerate(self.adj):
            if row >> v & 1:
                raise ValueError(f"self-adjacency at {v}")
            if row >> n:
                raise ValueError(f"row {v} out of range")
        for v, row in enumerate(self.adj):
            r = row
            while r:
                low = r & -r
                u = low.bit_length() - 1
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency {v}-{u}")
                r ^= low

    @classmethod
    def unchecked(cls, adj: tuple[int, ...], colors: tuple[int, ...], loop_colors=frozenset()) -> ColoredGraph:
        """Skip validation; for adjacency that is symmetric by construction."""
        g = object.__new__(cls)
        object.__setattr__(g, "adj", adj)
        object.__setattr__(g, "colors", colors)
        object.__setattr__(g, "loop_colors", frozenset(loop_colors))
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], colors=None,
                   loop_colors=()) -> ColoredGraph:
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError("loops are not edges")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        if colors is None:
            colors = (0,) * n
        return cls(tuple(rows), tuple(colors), frozenset(loop_colors))

    @property
    def order(self) -> int:
        return len(self.adj)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u, row in enumerate(self.adj):
            for v in range(u + 1, len(self.adj)):
                if row >> v & 1:
                    out.append((u, v))
        return out

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.adj) // 2

    def neighbours(self, v: int) -> list[int]:
        row, out, k = self.adj[v], [], 0
        while row:
            if row & 1:
                out.append(k)
            row >>= 1
            k += 1
        return out

    def relabel(self, perm: Sequence[int]) -> ColoredGraph:
        """The graph whose vertex ``perm[v]`` plays the role of ``v``."""
        n = self.order
        rows = [0] * n
        colors = [0] * n
        for v in range(n):
            img = 0
            for u in self.neighbours(v):
                img |= 1 << perm[u]
            rows[perm[v]] = img
            colors[perm[v]] = self.colors[v]
        return ColoredGraph(tuple(rows), tuple(colors), self.loop_colors)

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        n = self.order
        if len(perm) != n:
            return False
        adj, colors = self.adj, self.colors
        for v in range(n):
            pv = perm[v]
            if colors[pv] != colors[v]:
                return False
            row, img = adj[v], 0
            while row:
                low = row & -row
                img |= 1 << perm[low.bit_length() - 1]
                row ^= low
            if img != adj[pv]:
                return False
        return True


def cycle_graph(n: int) -> ColoredGraph:
    return ColoredGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> ColoredGraph:
    return ColoredGraph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite(a: int, b: int) -> ColoredGraph:
    return ColoredGraph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


# ---------------------------------------------------------------------------
# refinement
#
# A partition is ``(lab, cend)``: ``lab`` lists the vertices cell by cell and
# ``cend[i]`` is the end of the cell starting at position ``i``.


def _refine(adj, lab, cend, queue, trace):
    n = len(lab)
    inq = [False] * n
    for w in queue:
        inq[w] = True
    head = 0
    while head < len(queue):
        w = queue[head]
        head += 1
        inq[w] = False
        wmask = 0
        for v in lab[w:cend[w]]:
            wmask |= 1 << v
        i = 0
        while i < n:
            e = cend[i]
            if e - i > 1:
                cell = lab[i:e]
                cnts = [(adj[v] & wmask).bit_count() for v in cell]
                lo = min(cnts)
                if lo != max(cnts):
                    order = sorted(range(e - i), key=cnts.__getitem__)
                    lab[i:e] = [cell[k] for k in order]
                    starts = [i]
                    prev = cnts[order[0]]
                    trace.append((w, i, prev))
                    for pos in range(1, e - i):
                        c = cnts[order[pos]]
                        if c != prev:
                            starts.append(i + pos)
                            trace.append((w, i + pos, c))
                            prev = c
                    starts.append(e)
                    for a, b in zip(starts, starts[1:]):
                        cend[a] = b
                    if inq[i]:
                        for a in starts[1:-1]:
                            queue.append(a)
                            inq[a] = True
                    else:
                        big = max(range(len(starts) - 1), key=lambda k: starts[k + 1] - starts[k])
                        for k in range(len(starts) - 1):
                            if k != big:
                                queue.append(starts[k])
                                inq[starts[k]] = True
            i = e
    trace.append(len(queue))


def _initial_partition(graph: ColoredGraph):
    n = graph.order
    lab = sorted(range(n), key=lambda v: (graph.colors[v], v))
    cend = [0] * n
    starts = []
    i = 0
    while i < n:
        j = i
        while j < n and graph.colors[lab[j]] == graph.colors[lab[i]]:
            j += 1
        cend[i] = j
        starts.append(i)
        i = j
    trace = [tuple(graph.colors[lab[s]] for s in starts)]
    _refine(graph.adj, lab, cend, list(starts), trace)
    return lab, cend, tuple(trace)


def _individualize(adj, lab, cend, v):
    lab = lab[:]
    cend = cend[:]
    p = lab.index(v)
    i = 0
    while cend[i] <= p:
        i = cend[i]
    e = cend[i]
    lab[p], lab[i] = lab[i], lab[p]
    cend[i] = i + 1
    if i + 1 < e:
        cend[i + 1] = e
    trace = [i]
    _refine(adj, lab, cend, [i], trace)
    return lab, cend, tuple(trace)


def _target_cell(lab, cend):
    n = len(lab)
    best = None
    i = 0
    while i < n:
        size = cend[i] - i
        if size > 1 and (best is None or size < best[1] - best[0]):
            best = (i, cend[i])
            if size == 2:
                break
        i = cend[i]
    return best


def _certificate(graph: ColoredGraph, lab) -> tuple:
    pos = [0] * len(lab)
    for i, v in enumerate(lab):
        pos[v] = i
    rows = []
    for v in lab:
        row, img = graph.adj[v], 0
        while row:
            low = row & -row
            img |= 1 << pos[low.bit_length() - 1]
            row ^= low
        rows.append(img)
    return (tuple(graph.colors[v] for v in lab), tuple(rows))


def _orbit_of(point, gens):
    seen = {point}
    stack = [point]
    while stack:
        x = stack.pop()
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def _orbit_labels(n, gens):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x in range(n):
            a, b = find(x), find(g[x])
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    return [find(x) for x in range(n)]


# ---------------------------------------------------------------------------
# search


@dataclass
class AutomorphismReport:
    generators: list[Permutation]
    group_order: int
    canonical_certificate: bytes | None = None
    canonical_map: Permutation | None = None
    orbits: list[int] = field(default_factory=list)
    base: list[int] = field(default_factory=list)
    leaves: int = 0

    @property
    def certificate_hex(self) -> str:
        return self.canonical_certificate.hex() if self.canonical_certificate is not None else ""


class _Found(Exception):
    pass


class _Search:
    def __init__(self, graph: ColoredGraph, seeds, canonical: bool, trusted: bool = False):
        self.g = graph
        self.adj = graph.adj
        self.n = graph.order
        self.canonical = canonical
        self.gens: list[Permutation] = []
        for s in seeds:
            s = tuple(s)
            if not trusted and not graph.is_automorphism(s):
                raise ValueError("seed is not an automorphism")
            if not is_identity(s):
                self.gens.append(s)
        self.first_path: list[int] = []
        self.first_traces: list[tuple] = []
        self.first_lab = None
        self.best_lab = None
        self.best_cert = None
        self.best_traces: list[tuple] = []
        self.leaves = 0

    # generators fixing a prefix pointwise
    def _fixing(self, prefix):
        return [g for g in self.gens if all(g[x] == x for x in prefix)]

    def _add(self, gamma):
        if not is_identity(gamma) and gamma not in self.gens:
            self.gens.append(gamma)

    def run(self):
        lab, cend, tr = _initial_partition(self.g)
        self.root_trace = tr
        self._first(0, lab, cend, [tr])
        order = 1
        for k, v in enumerate(self.first_path):
            order *= len(_orbit_of(v, self._fixing(self.first_path[:k])))
        return order

    def _leaf_first(self, lab, traces):
        self.leaves += 1
        self.first_lab = lab
        if self.canonical:
            self.best_lab = lab
            self.best_cert = _certificate(self.g, lab)
            self.best_traces = list(traces)

    def _first(self, level, lab, cend, traces):
        target = _target_cell(lab, cend)
        if target is None:
            self._leaf_first(lab, traces)
            return
        c, e = target
        cell = sorted(lab[c:e])
        v = cell[0]
        self.first_path.append(v)
        lab2, cend2, tr = _individualize(self.adj, lab, cend, v)
        self.first_traces.append(tr)
        self._first(level + 1, lab2, cend2, traces + [tr])
        prefix = self.first_path[:level]
        explored_roots = set()
        nfix = len(self._fixing(prefix))
        labels = _orbit_labels(self.n, self._fixing(prefix))
        explored_roots.add(labels[v])
        for w in cell[1:]:
            fixing = self._fixing(prefix)
            if len(fixing) != nfix:
                nfix = len(fixing)
                labels = _orbit_labels(self.n, fixing)
                explored_roots = {labels[x] for x in explored_roots}
            if labels[w] in explored_roots:
                continue
            explored_roots.add(labels[w])
            lab2, cend2, tr = _individualize(self.adj, lab, cend, w)
            try:
                self._explore(level + 1, lab2, cend2, traces + [tr], prefix + [w])
            except _Found:
                pass

    def _best_cmp(self, traces):
        k = len(traces)
        a = traces
        b = self.best_traces[:k]
        if a == b:
            return 0
        return 1 if a > b else -1

    def _explore(self, level, lab, cend, traces, path):
        # traces[0] is the root trace, traces[j] the trace after j individualizations
        first_ok = (len(traces) - 1 <= len(self.first_traces)
                    and traces[-1] == self.first_traces[len(traces) - 2])
        # first-path agreement of all earlier levels was checked by the caller
        best = self._best_cmp(traces) if self.canonical else -1
        if not first_ok and best < 0:
            return
        target = _target_cell(lab, cend)
        if target is None:
            self._leaf(lab, traces, first_ok, best)
            return
        c, e = target
        cell = sorted(lab[c:e])
        fixing = self._fixing(path)
        labels = _orbit_labels(self.n, fixing) if fixing else None
        seen = set()
        for w in cell:
            if labels is not None:
                if labels[w] in seen:
                    continue
                seen.add(labels[w])
            lab2, cend2, tr = _individualize(self.adj, lab, cend, w)
            if not first_ok:
                self._explore_best(level + 1, lab2, cend2, traces + [tr], path + [w])
            else:
                self._explore(level + 1, lab2, cend2, traces + [tr], path + [w])

    def _explore_best(self, level, lab, cend, traces, path):
        # only the canonical comparison can still make this subtree relevant
        if self._best_cmp(traces) < 0:
            return
        target = _target_cell(lab, cend)
        if target is None:
            self._leaf(lab, traces, False, self._best_cmp(traces))
            return
        c, e = target
        cell = sorted(lab[c:e])
        fixing = self._fixing(path)
        labels = _orbit_labels(self.n, fixing) if fixing else None
        seen = set()
        for w in cell:
            if labels is not None:
                if labels[w] in seen:
                    continue
                seen.add(labels[w])
            lab2, cend2, tr = _individualize(self.adj, lab, cend, w)
            self._explore_best(level + 1, lab2, cend2, traces + [tr], path + [w])

    def _leaf(self, lab, traces, first_ok, best):
        self.leaves += 1
        if first_ok:
            gamma = [0] * self.n
            for a, b in zip(self.first_lab, lab):
                gamma[a] = b
            gamma = tuple(gamma)
            if self.g.is_automorphism(gamma):
                self._add(gamma)
                raise _Found
        if not self.canonical or best < 0:
            return
        cert = _certificate(self.g, lab)
        if best > 0 or cert > self.best_cert:
            self.best_cert = cert
            self.best_lab = lab
            self.best_traces = list(traces)
        elif cert == self.best_cert:
            gamma = [0] * self.n
            for a, b in zip(self.best_lab, lab):
                gamma[a] = b
            gamma = tuple(gamma)
            if self.g.is_automorphism(gamma):
                self._add(gamma)


def _encode_certificate(graph: ColoredGraph, cert) -> bytes:
    colors, rows = cert
    n = graph.order
    width = (n + 7) // 8
    out = bytearray()
    out += n.to_bytes(2, "big")
    for c in colors:
        out += (c & 0xFFFF).to_bytes(2, "big")
    for c in sorted(graph.loop_colors):
        out += b"L" + (c & 0xFFFF).to_bytes(2, "big")
    out += b"|"
    for r in rows:
        out += r.to_bytes(width, "big")
    return bytes(out)


def analyze(graph: ColoredGraph, seeds: Iterable[Sequence[int]] = (), canonical: bool = True,
            vertex_cap: int = DEFAULT_VERTEX_CAP, trusted_seeds: bool = False) -> AutomorphismReport:
    """Automorphism group (generators and exact order) and, unless
    ``canonical`` is false, a canonical certificate and labeling.

    ``trusted_seeds`` skips the automorphism check on ``seeds``; only pass it
    for permutations that are automorphisms by construction.
    """
    if graph.order > vertex_cap:
        raise VertexCapExceeded(f"{graph.order} vertices exceeds cap {vertex_cap}")
    if graph.order == 0:
        return AutomorphismReport([], 1, _encode_certificate(graph, ((), ())) if canonical else None, ())
    s = _Search(graph, seeds, canonical, trusted_seeds)
    order = s.run()
    report = AutomorphismReport(list(s.gens), order, leaves=s.leaves, base=list(s.first_path))
    report.orbits = _orbit_labels(graph.order, s.gens)
    if canonical:
        report.canonical_certificate = _encode_certificate(graph, s.best_cert)
        cmap = [0] * graph.order
        for i, v in enumerate(s.best_lab):
            cmap[v] = i
        report.canonical_map = tuple(cmap)
    return report


def is_isomorphic(g1: ColoredGraph, g2: ColoredGraph, seeds1=(), seeds2=()):
    """``(True, mapping)`` with ``mapping[v]`` the image of ``v`` in ``g2``,
    or ``(False, None)``."""
    if g1.order != g2.order or sorted(g1.colors) != sorted(g2.colors) \
            or g1.edge_count() != g2.edge_count() or g1.loop_colors != g2.loop_colors:
        return False, None
    r1 = analyze(g1, seeds1)
    r2 = analyze(g2, seeds2)
    if r1.canonical_certificate != r2.canonical_certificate:
        return False, None
    back = inverse(r2.canonical_map)
    mapping = compose(back, r1.canonical_map)
    for u, v in g1.edges():
        if not g2.has_edge(mapping[u], mapping[v]):
            raise AssertionError("canonical maps disagree on an edge")
    if any(g1.colors[v] != g2.colors[mapping[v]] for v in range(g1.order)):
        raise AssertionError("canonical maps disagree on a color")
    return True, mapping


# ---------------------------------------------------------------------------
# independent checks


def brute_force_aut_order(graph: ColoredGraph) -> int:
    """Count automorphisms by extending partial maps one vertex at a time.

    When every unmapped vertex has the same color and the same adjacency to
    the mapped ones and the unmapped vertices form a clique or an independent
    set, the remaining extensions are counted in closed form after checking a
    single completion.
    """
    n = graph.order
    if n > 16:
        raise VertexCapExceeded("brute force limited to 16 vertices")
    adj, colors = graph.adj, graph.colors
    image = [-1] * n
    used = [False] * n

    def homogeneous(k):
        rest = list(range(k, n))
        if len(rest) < 2:
            return False
        mapped = (1 << k) - 1
        c0, prof = colors[rest[0]], adj[rest[0]] & mapped
        restmask = ((1 << n) - 1) ^ mapped
        inner = [(adj[v] & restmask).bit_count() for v in rest]
        if not (all(x == 0 for x in inner) or all(x == len(rest) - 1 for x in inner)):
            return False
        return all(colors[v] == c0 and adj[v] & mapped == prof for v in rest)

    def count(k):
        if k == n:
            return 1
        if homogeneous(k):
            free = [x for x in range(n) if not used[x]]
            for v, x in zip(range(k, n), free):
                image[v] = x
            ok = graph.is_automorphism(image)
            for v in range(k, n):
                image[v] = -1
            return math.factorial(n - k) if ok else 0
        total = 0
        for x in range(n):
            if used[x] or colors[x] != colors[k]:
                continue
            good = True
            for u in range(k):
                if (adj[k] >> u & 1) != (adj[x] >> image[u] & 1):
                    good = False
                    break
            if not good:
                continue
            used[x] = True
            image[k] = x
            total += count(k + 1)
            used[x] = False
            image[k] = -1
        return total

    return count(0)


class _Level:
    __slots__ = ("point", "gens", "trans", "orbit", "todo")

    def __init__(self, point, n):
        self.point = point
        self.gens = []
        self.trans = {point: identity(n)}
        self.orbit = [point]
        self.todo = []


def group_order_from_generators(gens: Sequence[Sequence[int]], degree: int | None = None) -> int:
    """Order of the group generated by ``gens`` (deterministic Schreier-Sims)."""
    gens = [tuple(g) for g in gens]
    if degree is None:
        degree = len(gens[0]) if gens else 0
    for g in gens:
        if len(g) != degree:
            raise ValueError("generators of different degree")
        if not is_permutation(g):
            raise ValueError("not a permutation")
    levels: list[_Level] = []

    def sift(g, start):
        for i in range(start, len(levels)):
            lv = levels[i]
            u = lv.trans.get(g[lv.point])
            if u is None:
                return g, i
            g = compose(inverse(u), g)
        return g, len(levels)

    def close(j):
        lv = levels[j]
        while lv.todo:
            pt, gi = lv.todo.pop()
            g = lv.gens[gi]
            img = g[pt]
            u = lv.trans[pt]
            if img not in lv.trans:
                lv.trans[img] = compose(g, u)
                lv.orbit.append(img)
                lv.todo.extend((img, k) for k in range(len(lv.gens)))
            else:
                sg = compose(inverse(lv.trans[img]), compose(g, u))
                insert(sg, j + 1)

    def insert(g, start):
        h, i = sift(g, start)
        if is_identity(h):
            return
        if i == len(levels):
            moved = next(x for x in range(degree) if h[x] != x)
            levels.append(_Level(moved, degree))
        for k in range(start, i + 1):
            lv = levels[k]
            lv.gens.append(h)
            gi = len(lv.gens) - 1
            lv.todo.extend((pt, gi) for pt in lv.orbit)
        for k in range(i, start - 1, -1):
            close(k)

    for g in gens:
        insert(g, 0)
    order = 1
    for lv in levels:
        order *= len(lv.orbit)
    return order
