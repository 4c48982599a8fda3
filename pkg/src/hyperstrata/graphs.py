"""Labelled graphs and their calculus.

A graph is a finite set of flags, an involution pairing flags into edges
(fixed flags are leaves), a partition of the flags into vertices, and a
nonnegative genus label on every vertex.  Loops and parallel edges are fully
supported; a vertex may end up with an empty flag set (the dual graph of a
smooth unmarked curve).  Values are immutable after construction and all
operations are pure functions, so they are safe to share between workers.

Flag identifiers are opaque integers; neither vertex order nor flag order
carries meaning.  Graph identity is defined by ``canonical_form`` only.
"""

from __future__ import annotations

import itertools
from math import factorial
from typing import Iterable, Mapping, NamedTuple, Union

from .errors import (
    DisconnectedGraph,
    InvalidGraph,
    TypeMismatch,
    UnknownEdge,
    Unstabilizable,
)

Flag = int
Edge = frozenset


class Graph:
    """An immutable (flags, involution, vertex partition, genus) value."""

    __slots__ = ("flags", "sigma", "vertices", "genus_labels",
                 "_vertex_index", "_edges", "_leaves")

    def __init__(self, flags: Iterable[Flag], sigma: Mapping[Flag, Flag],
                 vertices: Iterable[Iterable[Flag]],
                 genus_labels: Iterable[int]):
        self.flags = frozenset(int(f) for f in flags)
        self.sigma = {f: int(sigma.get(f, f)) for f in self.flags}
        self.vertices = tuple(frozenset(int(f) for f in part)
                              for part in vertices)
        self.genus_labels = tuple(int(g) for g in genus_labels)
        self._validate()
        self._vertex_index = {f: i for i, part in enumerate(self.vertices)
                              for f in part}
        self._leaves = tuple(sorted(f for f in self.flags
                                    if self.sigma[f] == f))
        self._edges = frozenset(frozenset((f, p))
                                for f, p in self.sigma.items() if p != f)

    def _validate(self) -> None:
        if not self.vertices:
            raise InvalidGraph("a graph needs at least one vertex")
        if len(self.genus_labels) != len(self.vertices):
            raise InvalidGraph("genus labels must align with vertices")
        if any(g < 0 for g in self.genus_labels):
            raise InvalidGraph("genus labels must be nonnegative")
        seen: set[Flag] = set()
        for part in self.vertices:
            if part & seen:
                raise InvalidGraph("vertex parts must be disjoint")
            seen |= part
        if seen != self.flags:
            raise InvalidGraph("vertices must partition the flag set")
        for f, p in self.sigma.items():
            if p not in self.flags or self.sigma[p] != f:
                raise InvalidGraph("involution must be a self-inverse map "
                                   "on the flags")

    @property
    def leaves(self) -> tuple[Flag, ...]:
        """Fixed points of the involution, sorted."""
        return self._leaves

    @property
    def edges(self) -> frozenset:
        """Two-element orbits of the involution, as frozensets of flags."""
        return self._edges

    def vertex_of(self, flag: Flag) -> int:
        return self._vertex_index[flag]

    def __repr__(self) -> str:
        return (f"Graph(flags={len(self.flags)}, vertices={len(self.vertices)}, "
                f"edges={len(self._edges)}, leaves={len(self._leaves)}, "
                f"genus={self.genus_labels})")


class NumberedGraph:
    """A graph together with a leaf numbering 1..n."""

    __slots__ = ("graph", "numbering")

    def __init__(self, graph: Graph, numbering: Mapping[Flag, int]):
        self.graph = graph
        self.numbering = {int(f): int(i) for f, i in numbering.items()}
        leaves = set(graph.leaves)
        if set(self.numbering) != leaves:
            raise InvalidGraph("numbering must be defined on exactly the leaves")
        values = sorted(self.numbering.values())
        if values != list(range(1, len(leaves) + 1)):
            raise InvalidGraph("numbering must be a bijection onto 1..n")

    def __repr__(self) -> str:
        return f"NumberedGraph({self.graph!r}, n={len(self.numbering)})"


GraphLike = Union[Graph, NumberedGraph]


class GraphType(NamedTuple):
    genus: int
    leaf_count: int


def _as_graph(g: GraphLike) -> Graph:
    return g.graph if isinstance(g, NumberedGraph) else g


def _vertex_adjacency(g: Graph) -> list[list[int]]:
    """Vertex adjacency lists (with repetition for parallel edges, loops
    listed once per loop)."""
    adj: list[list[int]] = [[] for _ in g.vertices]
    for e in g.edges:
        f1, f2 = sorted(e)
        u, v = g.vertex_of(f1), g.vertex_of(f2)
        adj[u].append(v)
        if u != v:
            adj[v].append(u)
    return adj


def is_connected(g: GraphLike) -> bool:
    g = _as_graph(g)
    nv = len(g.vertices)
    if nv == 1:
        return True
    adj = _vertex_adjacency(g)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == nv


def betti1(g: GraphLike) -> int:
    """First Betti number |E| - |V| + 1 of a connected graph."""
    g = _as_graph(g)
    if not is_connected(g):
        raise DisconnectedGraph("betti1 requires a connected graph")
    return len(g.edges) - len(g.vertices) + 1


def genus(g: GraphLike) -> int:
    """Sum of the vertex genus labels plus the first Betti number."""
    g = _as_graph(g)
    return sum(g.genus_labels) + betti1(g)


def graph_type(g: GraphLike) -> GraphType:
    gg = _as_graph(g)
    return GraphType(genus(gg), len(gg.leaves))


def is_stable(g: GraphLike) -> bool:
    """True iff every vertex satisfies 2*genus - 2 + #flags > 0."""
    g = _as_graph(g)
    return all(2 * gl - 2 + len(part) > 0
               for gl, part in zip(g.genus_labels, g.vertices))


def stabilize(g: GraphLike) -> GraphLike:
    """Iteratively delete genus-0 vertices carrying one or two flags.

    A one-flag vertex disappears together with the edge it hangs on.  A
    two-flag vertex is spliced out: its two incident half-edges are joined
    into a single edge (which may be a loop), or a leaf is passed through to
    the far vertex.  Leaf flags keep their identity, so a numbering
    survives.  Raises Unstabilizable when iteration would empty the graph.
    """
    numbered = isinstance(g, NumberedGraph)
    graph = _as_graph(g)
    if not is_connected(graph):
        raise DisconnectedGraph("stabilize requires a connected graph")
    total = genus(graph)
    n = len(graph.leaves)
    if 2 * total - 2 + n <= 0:
        raise Unstabilizable(f"type {(total, n)} has no stable model")

    sigma = dict(graph.sigma)
    parts = [set(p) for p in graph.vertices]
    labels = list(graph.genus_labels)
    alive = [True] * len(parts)
    owner = {f: i for i, p in enumerate(parts) for f in p}

    def unstable_index() -> int | None:
        for i, p in enumerate(parts):
            if alive[i] and labels[i] == 0 and 1 <= len(p) <= 2:
                return i
        return None

    while (i := unstable_index()) is not None:
        part = parts[i]
        if len(part) == 1:
            (f,) = part
            p = sigma[f]
            if p == f:
                raise Unstabilizable("graph reduces to a marked point")
            del sigma[f], sigma[p]
            parts[owner[p]].discard(p)
            alive[i] = False
            part.clear()
            continue
        f1, f2 = sorted(part)
        if sigma[f1] == f2:
            raise Unstabilizable("graph reduces to an unmarked cycle")
        leaf1, leaf2 = sigma[f1] == f1, sigma[f2] == f2
        if leaf1 and leaf2:
            raise Unstabilizable("graph reduces to a twice-marked point")
        if leaf1 or leaf2:
            f_leaf, f_edge = (f1, f2) if leaf1 else (f2, f1)
            q = sigma[f_edge]
            far = owner[q]
            del sigma[f_edge], sigma[q]
            parts[far].discard(q)
            parts[far].add(f_leaf)
            owner[f_leaf] = far
        else:
            a1, a2 = sigma[f1], sigma[f2]
            del sigma[f1], sigma[f2]
            sigma[a1] = a2
            sigma[a2] = a1
        alive[i] = False
        part.clear()

    new_parts, new_labels = [], []
    for i, p in enumerate(parts):
        if alive[i] or p:
            new_parts.append(p)
            new_labels.append(labels[i])
    result = Graph(sigma.keys(), sigma, new_parts, new_labels)
    if not is_stable(result):
        raise Unstabilizable("residual positive-genus vertex with too few flags")
    if genus(result) != total or set(result.leaves) != set(graph.leaves):
        raise InvalidGraph("stabilization broke a conserved quantity")
    if numbered:
        return NumberedGraph(result, g.numbering)
    return result


def contract_edges(g: GraphLike, edges_to_contract) -> GraphLike:
    """Contract a subset of the edges.

    Every cluster of vertices joined by contracted edges becomes a single
    vertex whose genus is the genus of the contracted subgraph (label sum
    plus its internal first Betti number).  Leaves are untouched.
    """
    numbered = isinstance(g, NumberedGraph)
    graph = _as_graph(g)
    chosen = {frozenset(e) for e in edges_to_contract}
    for e in chosen:
        if e not in graph.edges:
            raise UnknownEdge(f"{sorted(e)} is not an edge of the graph")

    parent = list(range(len(graph.vertices)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in chosen:
        f1, f2 = sorted(e)
        a, b = find(graph.vertex_of(f1)), find(graph.vertex_of(f2))
        if a != b:
            parent[a] = b

    clusters: dict[int, list[int]] = {}
    for i in range(len(graph.vertices)):
        clusters.setdefault(find(i), []).append(i)
    internal_edges: dict[int, int] = {r: 0 for r in clusters}
    for e in chosen:
        f1, _ = sorted(e)
        internal_edges[find(graph.vertex_of(f1))] += 1

    dropped = {f for e in chosen for f in e}
    new_parts, new_labels = [], []
    for root, members in sorted(clusters.items()):
        flags = set().union(*(graph.vertices[i] for i in members)) - dropped
        b1 = internal_edges[root] - len(members) + 1
        label = sum(graph.genus_labels[i] for i in members) + b1
        new_parts.append(flags)
        new_labels.append(label)
    sigma = {f: p for f, p in graph.sigma.items() if f not in dropped}
    result = Graph(sigma.keys(), sigma, new_parts, new_labels)
    if numbered:
        return NumberedGraph(result, g.numbering)
    return result


# --------------------------------------------------------------------------
# Canonical forms.
#
# Trees are encoded by rooting at the (1- or 2-vertex) center and hashing
# subtree structure bottom-up; general multigraphs go through colour
# refinement with backtracking on ties.  Graphs in this project stay small
# (well under ~30 flags), so worst-case backtracking is acceptable.
# --------------------------------------------------------------------------

def _vertex_colors(g: Graph, numbering: Mapping[Flag, int] | None,
                   pinned: frozenset[Flag]) -> list[tuple]:
    colors = []
    for part, gl in zip(g.vertices, g.genus_labels):
        labels = []
        anon = 0
        for f in part:
            if g.sigma[f] != f:
                continue
            if numbering is not None:
                labels.append(numbering[f])
            elif f in pinned:
                labels.append(f)
            else:
                anon += 1
        colors.append((gl, anon, tuple(sorted(labels))))
    return colors


def _tree_adjacency(g: Graph) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in g.vertices]
    for e in g.edges:
        f1, f2 = sorted(e)
        u, v = g.vertex_of(f1), g.vertex_of(f2)
        adj[u].append(v)
        adj[v].append(u)
    return adj


def _tree_centers(adj: list[list[int]]) -> list[int]:
    nv = len(adj)
    if nv <= 2:
        return list(range(nv))
    degree = [len(a) for a in adj]
    layer = [v for v in range(nv) if degree[v] == 1]
    removed = len(layer)
    while removed < nv:
        nxt = []
        for v in layer:
            for u in adj[v]:
                degree[u] -= 1
                if degree[u] == 1:
                    nxt.append(u)
        if not nxt:
            break
        removed += len(nxt)
        layer = nxt
    return sorted(layer)


def _rooted_encoding(adj, colors, root: int, parent: int | None):
    children = tuple(sorted(_rooted_encoding(adj, colors, u, root)
                            for u in adj[root] if u != parent))
    return (colors[root], children)


def _tree_canonical(g: Graph, numbering, pinned) -> tuple:
    colors = _vertex_colors(g, numbering, pinned)
    adj = _tree_adjacency(g)
    centers = _tree_centers(adj)
    if len(centers) == 1:
        return ("c1", _rooted_encoding(adj, colors, centers[0], None))
    a, b = centers
    halves = sorted((_rooted_encoding(adj, colors, a, b),
                     _rooted_encoding(adj, colors, b, a)))
    return ("c2", tuple(halves))


def _multigraph_data(g: Graph):
    mult: dict[tuple[int, int], int] = {}
    loops = [0] * len(g.vertices)
    for e in g.edges:
        f1, f2 = sorted(e)
        u, v = g.vertex_of(f1), g.vertex_of(f2)
        if u == v:
            loops[u] += 1
        else:
            key = (min(u, v), max(u, v))
            mult[key] = mult.get(key, 0) + 1
    return mult, loops


def _refine(colors: list[int], mult, loops) -> list[int]:
    # Colour refinement only ever splits classes, so it stabilizes once the
    # class count stops growing.
    nv = len(colors)
    while True:
        sigs = []
        for v in range(nv):
            nb = []
            for (a, b), m in mult.items():
                if a == v:
                    nb.append((m, colors[b]))
                elif b == v:
                    nb.append((m, colors[a]))
            sigs.append((colors[v], loops[v], tuple(sorted(nb))))
        order = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [order[s] for s in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def _encode_ordered(base_colors, mult, loops, order: list[int]) -> tuple:
    pos = {v: i for i, v in enumerate(order)}
    edge_list = sorted((min(pos[a], pos[b]), max(pos[a], pos[b]), m)
                       for (a, b), m in mult.items())
    return (tuple(base_colors[v] for v in order),
            tuple(loops[v] for v in order),
            tuple(edge_list))


def _generic_canonical(g: Graph, numbering, pinned) -> tuple:
    base_colors = _vertex_colors(g, numbering, pinned)
    mult, loops = _multigraph_data(g)
    nv = len(g.vertices)
    init_order = {c: i for i, c in enumerate(sorted(set(base_colors)))}
    start = [init_order[c] for c in base_colors]

    best: list[tuple | None] = [None]

    def search(colors: list[int]) -> None:
        colors = _refine(colors, mult, loops)
        classes: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            classes.setdefault(c, []).append(v)
        target = None
        for c in sorted(classes):
            if len(classes[c]) > 1:
                target = classes[c]
                break
        if target is None:
            order = sorted(range(nv), key=lambda v: colors[v])
            enc = _encode_ordered(base_colors, mult, loops, order)
            if best[0] is None or enc < best[0]:
                best[0] = enc
            return
        fresh = max(colors) + 1
        for v in target:
            branch = list(colors)
            branch[v] = fresh
            search(branch)

    search(start)
    assert best[0] is not None
    return best[0]


def canonical_form(g: GraphLike) -> bytes:
    """Canonical byte string: equal iff the graphs are isomorphic.

    Isomorphism preserves genus labels and, for NumberedGraph input, the
    leaf numbering.  Deterministic across runs (no hashing involved).
    """
    numbered = isinstance(g, NumberedGraph)
    graph = _as_graph(g)
    numbering = g.numbering if numbered else None
    prefix = "NG" if numbered else "G"

    comp_encodings = []
    for comp in _components(graph):
        if len(comp.edges) - len(comp.vertices) + 1 == 0:
            enc = ("t", _tree_canonical(comp, numbering, frozenset()))
        else:
            enc = ("m", _generic_canonical(comp, numbering, frozenset()))
        comp_encodings.append(enc)
    payload = (prefix, tuple(sorted(comp_encodings)))
    return repr(payload).encode("ascii")


def _components(g: Graph) -> list[Graph]:
    adj = _vertex_adjacency(g)
    seen: set[int] = set()
    out = []
    for start in range(len(g.vertices)):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        idx = sorted(comp)
        flags = set().union(*(g.vertices[i] for i in idx)) if idx else set()
        sigma = {f: g.sigma[f] for f in flags}
        out.append(Graph(flags, sigma, [g.vertices[i] for i in idx],
                         [g.genus_labels[i] for i in idx]))
    return out


# --------------------------------------------------------------------------
# Automorphisms.
#
# Counting never enumerates flag maps: a vertex map preserving colours and
# edge multiplicities lifts to exactly the same number of flag maps, namely
# the product of (unlabelled-leaf count)! per vertex, (parallel-edge
# count)! per vertex pair, and (loop count)! * 2^(loop count) per vertex.
# --------------------------------------------------------------------------

def _rooted_aut(adj, colors, root: int, parent: int | None) -> tuple[tuple, int]:
    child_data = [_rooted_aut(adj, colors, u, root)
                  for u in adj[root] if u != parent]
    child_data.sort(key=lambda t: t[0])
    count = factorial(colors[root][1])  # permute anonymous leaves
    i = 0
    while i < len(child_data):
        j = i
        while j < len(child_data) and child_data[j][0] == child_data[i][0]:
            count *= child_data[j][1]
            j += 1
        count *= factorial(j - i)
        i = j
    enc = (colors[root], tuple(c for c, _ in child_data))
    return enc, count


def _tree_aut_count(g: Graph, pinned: frozenset[Flag]) -> int:
    colors = _vertex_colors(g, None, pinned)
    adj = _tree_adjacency(g)
    centers = _tree_centers(adj)
    if len(centers) == 1:
        return _rooted_aut(adj, colors, centers[0], None)[1]
    a, b = centers
    enc_a, cnt_a = _rooted_aut(adj, colors, a, b)
    enc_b, cnt_b = _rooted_aut(adj, colors, b, a)
    total = cnt_a * cnt_b
    if enc_a == enc_b:
        total *= 2
    return total


def _generic_aut_count(g: Graph, pinned: frozenset[Flag]) -> int:
    base_colors = _vertex_colors(g, None, pinned)
    mult, loops = _multigraph_data(g)
    nv = len(g.vertices)
    init = {c: i for i, c in enumerate(sorted(set(base_colors)))}
    colors = _refine([init[c] for c in base_colors], mult, loops)

    def m_of(u: int, v: int) -> int:
        return mult.get((min(u, v), max(u, v)), 0)

    count = [0]

    def backtrack(image: list[int | None], used: set[int]) -> None:
        v = len([x for x in image if x is not None])
        if v == nv:
            count[0] += 1
            return
        for w in range(nv):
            if w in used or colors[w] != colors[v]:
                continue
            if loops[w] != loops[v]:
                continue
            ok = all(image[u] is None or m_of(v, u) == m_of(w, image[u])
                     for u in range(nv))
            if ok:
                image[v] = w
                used.add(w)
                backtrack(image, used)
                used.remove(w)
                image[v] = None

    backtrack([None] * nv, set())
    vertex_maps = count[0]
    lift = 1
    for m in mult.values():
        lift *= factorial(m)
    for v in range(nv):
        lift *= factorial(loops[v]) * (2 ** loops[v])
        lift *= factorial(base_colors[v][1])
    return vertex_maps * lift


def automorphism_count(g: GraphLike, fixed_leaves: Iterable[Flag] = ()) -> int:
    """Order of the automorphism group.

    Leaves are interchangeable except for those in ``fixed_leaves``, which
    every automorphism must fix pointwise.  Genus labels are preserved.
    """
    graph = _as_graph(g)
    pinned = frozenset(int(f) for f in fixed_leaves)
    if not pinned <= set(graph.leaves):
        raise InvalidGraph("fixed_leaves must be leaves of the graph")
    if is_connected(graph) and len(graph.edges) - len(graph.vertices) + 1 == 0:
        return _tree_aut_count(graph, pinned)
    total = 1
    for comp in _components(graph):
        if len(comp.edges) - len(comp.vertices) + 1 == 0:
            total *= _tree_aut_count(comp, pinned & comp.flags)
        else:
            total *= _generic_aut_count(comp, pinned & comp.flags)
    return total


def leq(g1: GraphLike, g2: GraphLike) -> bool:
    """True iff g2 arises from a graph isomorphic to g1 by contracting a
    subset of its edges (so the g1-stratum lies in the closure of the
    g2-stratum)."""
    if graph_type(g1) != graph_type(g2):
        raise TypeMismatch(f"{graph_type(g1)} vs {graph_type(g2)}")
    target = canonical_form(g2)
    edges = sorted(tuple(sorted(e)) for e in _as_graph(g1).edges)
    need = len(edges) - len(_as_graph(g2).edges)
    if need < 0:
        return False
    seen = set()
    for subset in itertools.combinations(edges, need):
        contracted = contract_edges(g1, [frozenset(e) for e in subset])
        form = canonical_form(contracted)
        if form in seen:
            continue
        seen.add(form)
        if form == target:
            return True
    return False
