"""Stable pointed trees of genus zero.

Enumeration of the isomorphism classes of stable numbered trees with n
leaves, their orbits under leaf renumbering, the parity annotation (even and
odd edges, ramification and edge-valence counts), the star trees used by the
spectral certificate, and stratum dimensions.

Numbered trees are generated through nested families of leaf splits: a tree
with k edges corresponds to a laminar family of k proper subsets of the leaf
set, and two numbered trees are isomorphic exactly when their split families
agree.  This makes the numbered enumeration duplicate-free by construction.
Unnumbered classes are generated separately from unlabelled tree shapes with
leaf weights, so the two routes cross-check each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterator, Optional

from .errors import (
    InvalidGraph,
    NotATree,
    OddLeafTotal,
    OutOfRange,
    TypeMismatch,
)
from .graphs import (
    Graph,
    NumberedGraph,
    automorphism_count,
    betti1,
    canonical_form,
    graph_type,
    is_connected,
)

MAX_LEAVES = 12
# The goodness-pruned search stays small far beyond the full enumeration
# bound; 22 leaves covers certificates up to genus 10.
MAX_LEAVES_GOOD = 22


@dataclass(frozen=True, eq=False)
class AnnotatedTree:
    """A numbered genus-0 tree with cached parity and vertex counts.

    parity maps every flag to 0 (even) or 1 (odd); both flags of an edge
    share the edge's parity and every leaf is odd.  rho counts the odd flags
    at each vertex, nu the non-leaf flags; a vertex is internal when it has
    more than one edge.
    """

    tree: NumberedGraph
    parity: dict
    rho: tuple[int, ...]
    nu: tuple[int, ...]
    internal: tuple[bool, ...]

    @property
    def graph(self) -> Graph:
        return self.tree.graph

    @property
    def edge_count(self) -> int:
        return len(self.tree.graph.edges)

    @property
    def leaf_count(self) -> int:
        return len(self.tree.graph.leaves)

    def __repr__(self) -> str:
        return (f"AnnotatedTree(n={self.leaf_count}, "
                f"edges={self.edge_count}, rho={self.rho})")


@dataclass(frozen=True, eq=False)
class StratumClass:
    """One unnumbered isomorphism class of stable trees.

    representative carries an arbitrary but deterministic numbering;
    orbit_size is the number of numbered classes in its renumbering orbit,
    computed by orbit-stabilizer rather than by listing the orbit.
    """

    representative: NumberedGraph
    edge_count: int
    orbit_size: int
    canonical_key: bytes

    def annotated(self) -> AnnotatedTree:
        return annotate(self.representative)

    def profile(self) -> tuple[int, ...]:
        """Sorted flag counts of the vertices (sizes of the stratum factors)."""
        return tuple(sorted(len(p) for p in self.representative.graph.vertices))

    def __repr__(self) -> str:
        return (f"StratumClass(edges={self.edge_count}, "
                f"orbit={self.orbit_size}, profile={self.profile()})")


def _rooted_tree_structure(g: Graph):
    """Per-vertex children lists and parent edges for the tree rooted at 0."""
    adj: list[list[tuple[int, frozenset]]] = [[] for _ in g.vertices]
    for e in g.edges:
        f1, f2 = sorted(e)
        u, v = g.vertex_of(f1), g.vertex_of(f2)
        adj[u].append((v, e))
        adj[v].append((u, e))
    parent: list[Optional[int]] = [None] * len(g.vertices)
    parent_edge: list[Optional[frozenset]] = [None] * len(g.vertices)
    order = [0]
    seen = {0}
    queue = [0]
    while queue:
        v = queue.pop()
        for u, e in adj[v]:
            if u not in seen:
                seen.add(u)
                parent[u] = v
                parent_edge[u] = e
                order.append(u)
                queue.append(u)
    return order, parent, parent_edge


def annotate(t: NumberedGraph) -> AnnotatedTree:
    """Attach edge parities and the rho/nu/internal counts to a tree.

    The parity of an edge is the parity of the number of leaves on either
    side of its removal, which is well defined only when the total number of
    leaves is even.
    """
    g = t.graph
    if not is_connected(g) or betti1(g) != 0:
        raise NotATree("annotation requires a connected tree")
    n = len(g.leaves)
    if n % 2:
        raise OddLeafTotal(f"edge parity is undefined for {n} leaves")

    order, parent, parent_edge = _rooted_tree_structure(g)
    own_leaves = [sum(1 for f in part if g.sigma[f] == f) for part in g.vertices]
    subtree = list(own_leaves)
    for v in reversed(order):
        if parent[v] is not None:
            subtree[parent[v]] += subtree[v]

    edge_parity: dict[frozenset, int] = {}
    for v in order:
        if parent_edge[v] is not None:
            edge_parity[parent_edge[v]] = subtree[v] % 2

    parity: dict[int, int] = {}
    for f in g.flags:
        p = g.sigma[f]
        if p == f:
            parity[f] = 1
        else:
            parity[f] = edge_parity[frozenset((f, p))]

    rho, nu = [], []
    for part in g.vertices:
        rho.append(sum(parity[f] for f in part))
        nu.append(sum(1 for f in part if g.sigma[f] != f))
    internal = tuple(x > 1 for x in nu)
    return AnnotatedTree(t, parity, tuple(rho), tuple(nu), internal)


def is_good(t: AnnotatedTree) -> bool:
    """True iff every internal vertex has at least four odd flags."""
    return all(r >= 4 for r, inner in zip(t.rho, t.internal) if inner)


def stratum_dimension(t) -> int:
    """Dimension n - 3 - r of the stratum of a stable tree with r edges."""
    g = t.graph if isinstance(t, (NumberedGraph, AnnotatedTree)) else t
    return len(g.leaves) - 3 - len(g.edges)


# --------------------------------------------------------------------------
# Numbered enumeration through laminar split families.
#
# An edge of a stable (0, n) tree is recorded as the set of leaves on the
# side away from leaf 1, a subset of {2..n} of size 2..n-2 stored as a
# bitmask (bit b <-> leaf b+2).  A family of such splits comes from a tree
# exactly when it is laminar (pairwise nested or disjoint), and the
# resulting tree is automatically stable.
# --------------------------------------------------------------------------

def _split_candidates(n: int) -> list[int]:
    lo, hi = 2, n - 2
    return [m for m in range(1, 1 << (n - 1))
            if lo <= m.bit_count() <= hi]


def _laminar_families(n: int, edge_count: Optional[int] = None
                      ) -> Iterator[tuple[int, ...]]:
    cands = _split_candidates(n)
    kmax = n - 3 if edge_count is None else edge_count
    chosen: list[int] = []

    def rec(start: int) -> Iterator[tuple[int, ...]]:
        if edge_count is None or len(chosen) == edge_count:
            yield tuple(chosen)
        if len(chosen) >= kmax:
            return
        for i in range(start, len(cands)):
            m = cands[i]
            ok = True
            for c in chosen:
                inter = m & c
                if inter and inter != m and inter != c:
                    ok = False
                    break
            if ok:
                chosen.append(m)
                yield from rec(i + 1)
                chosen.pop()

    yield from rec(0)


def _containment_forest(family: tuple[int, ...]):
    """parent[i] = index of the smallest split containing split i, or -1."""
    idx = sorted(range(len(family)), key=lambda i: family[i].bit_count())
    parent = [-1] * len(family)
    for pos, i in enumerate(idx):
        for j in idx[pos + 1:]:
            if family[i] & family[j] == family[i]:
                parent[i] = j
                break
    return parent


def _family_to_tree(n: int, family: tuple[int, ...]) -> NumberedGraph:
    parent = _containment_forest(family)
    children: list[list[int]] = [[] for _ in family]
    roots = []
    for i, p in enumerate(parent):
        if p == -1:
            roots.append(i)
        else:
            children[p].append(i)

    def leaves_of_mask(mask: int) -> list[int]:
        return [b + 2 for b in range(n - 1) if mask >> b & 1]

    sigma: dict[int, int] = {}
    parts: list[set[int]] = []
    # vertex 0 is the root (the side of leaf 1); vertex i+1 realizes split i
    root_part: set[int] = {1}
    covered = 0
    for i in roots:
        covered |= family[i]
    root_part.update(x for x in range(2, n + 1)
                     if not (covered >> (x - 2)) & 1)
    parts.append(root_part)
    for i, mask in enumerate(family):
        inner = mask
        for c in children[i]:
            inner &= ~family[c]
        parts.append(set(leaves_of_mask(inner)))

    next_flag = n + 1
    for i in range(len(family)):
        up = parent[i] + 1 if parent[i] != -1 else 0
        f_up, f_down = next_flag, next_flag + 1
        next_flag += 2
        sigma[f_up] = f_down
        sigma[f_down] = f_up
        parts[up].add(f_up)
        parts[i + 1].add(f_down)

    flags = set().union(*parts)
    graph = Graph(flags, sigma, parts, [0] * len(parts))
    return NumberedGraph(graph, {k: k for k in range(1, n + 1)})


def _family_profile(n: int, family: tuple[int, ...]) -> tuple[int, ...]:
    """Vertex flag counts of the tree of a split family, without building it."""
    if not family:
        return (n,)
    parent = _containment_forest(family)
    n_children = [0] * len(family)
    covered_root = 0
    root_children = 0
    for i, p in enumerate(parent):
        if p == -1:
            covered_root |= family[i]
            root_children += 1
        else:
            n_children[p] += 1
    sizes = [n - covered_root.bit_count() + root_children]
    for i, mask in enumerate(family):
        inner = mask.bit_count()
        for j, p in enumerate(parent):
            if p == i:
                inner -= family[j].bit_count()
        sizes.append(inner + 1 + n_children[i])
    return tuple(sorted(sizes))


def enumerate_trees(n: int, edge_count: Optional[int] = None
                    ) -> list[NumberedGraph]:
    """All isomorphism classes of stable numbered trees of type (0, n).

    Exactly one representative per class, in a deterministic order (sorted
    canonical forms).  Practical up to n = 8; the class count grows like
    n! beyond that.
    """
    if not 3 <= n <= MAX_LEAVES:
        raise OutOfRange(f"leaf count {n} outside 3..{MAX_LEAVES}")
    if edge_count is not None and not 0 <= edge_count <= n - 3:
        raise OutOfRange(f"edge count {edge_count} outside 0..{n - 3}")
    trees = [_family_to_tree(n, fam) for fam in _laminar_families(n, edge_count)]
    return sorted(trees, key=canonical_form)


def orbit_representatives(trees: list[NumberedGraph]) -> list[StratumClass]:
    """Group numbered trees into leaf-renumbering orbits.

    orbit_size comes from orbit-stabilizer: n! over the order of the
    automorphism group with leaves unlabelled.
    """
    if not trees:
        return []
    t0 = graph_type(trees[0])
    groups: dict[bytes, list[NumberedGraph]] = {}
    for t in trees:
        if graph_type(t) != t0:
            raise TypeMismatch("orbit grouping requires one graph type")
        groups.setdefault(canonical_form(t.graph), []).append(t)
    n = t0.leaf_count
    out = []
    for key, members in groups.items():
        rep = min(members, key=canonical_form)
        aut = automorphism_count(rep.graph)
        orbit, rem = divmod(factorial(n), aut)
        if rem:
            raise InvalidGraph("automorphism order must divide n!")
        out.append(StratumClass(rep, len(rep.graph.edges), orbit, key))
    return sorted(out, key=lambda c: (c.edge_count, c.canonical_key))


# --------------------------------------------------------------------------
# Unnumbered enumeration from unlabelled tree shapes with leaf weights.
# --------------------------------------------------------------------------

def _shape_encoding(adj, root: int, parent: int) -> tuple:
    return tuple(sorted(_shape_encoding(adj, u, root)
                        for u in adj[root] if u != parent))


def _shape_canonical(adj) -> tuple:
    nv = len(adj)
    if nv == 1:
        return ((),)
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
    centers = sorted(layer)
    if len(centers) == 1:
        return ("1", _shape_encoding(adj, centers[0], -1))
    a, b = centers
    return ("2", tuple(sorted((_shape_encoding(adj, a, b),
                               _shape_encoding(adj, b, a)))))


@lru_cache(maxsize=None)
def _tree_shapes(nv: int) -> tuple:
    """All unlabelled trees on nv vertices, as adjacency tuples."""
    if nv == 1:
        return (((),),)
    out: dict[tuple, tuple] = {}
    for adj in _tree_shapes(nv - 1):
        for attach in range(nv - 1):
            grown = [list(a) for a in adj] + [[attach]]
            grown[attach].append(nv - 1)
            key = _shape_canonical(grown)
            if key not in out:
                out[key] = tuple(tuple(sorted(a)) for a in grown)
    return tuple(out[k] for k in sorted(out))


def _postorder(adj, root: int = 0):
    parent = [-1] * len(adj)
    order = []
    stack = [(root, -1, False)]
    while stack:
        v, par, expanded = stack.pop()
        if expanded:
            order.append(v)
            continue
        parent[v] = par
        stack.append((v, par, True))
        for u in adj[v]:
            if u != par:
                stack.append((u, v, False))
    return order, parent


def _weight_assignments(adj, total: int, only_good: bool
                        ) -> Iterator[tuple[int, ...]]:
    """Leaf-weight vectors making the shape a stable (0, total) tree.

    With only_good, branches that cannot reach rho >= 4 at an internal
    vertex are cut; the caller still applies the authoritative goodness
    filter afterwards.
    """
    nv = len(adj)
    deg = [len(a) for a in adj]
    order, parent = _postorder(adj)
    min_w = []
    for v in range(nv):
        base = max(0, 3 - deg[v])
        if only_good and deg[v] >= 2:
            base = max(base, 4 - deg[v])
        min_w.append(base)
    suffix = [0] * (nv + 1)
    for i in range(nv - 1, -1, -1):
        suffix[i] = suffix[i + 1] + min_w[order[i]]

    w = [0] * nv
    subtree = [0] * nv

    def rec(i: int, remaining: int) -> Iterator[tuple[int, ...]]:
        if i == nv:
            yield tuple(w)
            return
        v = order[i]
        is_root = parent[v] == -1
        child_sum = sum(subtree[u] for u in adj[v] if u != parent[v])
        odd_children = sum(subtree[u] % 2 for u in adj[v] if u != parent[v])
        if is_root:
            choices = [remaining] if remaining >= min_w[v] else []
        else:
            hi = remaining - suffix[i + 1]
            choices = range(min_w[v], hi + 1)
        for wv in choices:
            sub = wv + child_sum
            rho = wv + odd_children + (0 if is_root else sub % 2)
            if only_good and deg[v] > 1 and rho < 4:
                continue
            w[v] = wv
            subtree[v] = sub
            yield from rec(i + 1, remaining - wv)

    yield from rec(0, total)


def _shape_to_tree(adj, weights) -> NumberedGraph:
    nv = len(adj)
    parts: list[set[int]] = [set() for _ in range(nv)]
    nxt = 1
    numbering = {}
    for v in range(nv):
        for _ in range(weights[v]):
            parts[v].add(nxt)
            numbering[nxt] = nxt
            nxt += 1
    sigma: dict[int, int] = {}
    for v in range(nv):
        for u in adj[v]:
            if u > v:
                f1, f2 = nxt, nxt + 1
                nxt += 2
                sigma[f1] = f2
                sigma[f2] = f1
                parts[v].add(f1)
                parts[u].add(f2)
    flags = set().union(*parts)
    graph = Graph(flags, sigma, parts, [0] * nv)
    return NumberedGraph(graph, numbering)


def unnumbered_classes(n: int, edge_count: Optional[int] = None,
                       only_good: bool = False) -> list[StratumClass]:
    """Isomorphism classes of stable (0, n) trees with leaves unlabelled.

    Each class carries the size of its renumbering orbit, so sums over all
    numbered classes can be taken as orbit-weighted sums over this list.
    With only_good (n even), only classes whose internal vertices all have
    rho >= 4 are returned.
    """
    bound = MAX_LEAVES_GOOD if only_good else MAX_LEAVES
    if not 3 <= n <= bound:
        raise OutOfRange(f"leaf count {n} outside 3..{bound}")
    if only_good and n % 2:
        raise OddLeafTotal("good trees need an even leaf count")
    if edge_count is not None and not 0 <= edge_count <= n - 3:
        raise OutOfRange(f"edge count {edge_count} outside 0..{n - 3}")
    ks = range(n - 2) if edge_count is None else [edge_count]
    found: dict[bytes, StratumClass] = {}
    for k in ks:
        if k > n - 3:
            continue
        for adj in _tree_shapes(k + 1):
            for weights in _weight_assignments(adj, n, only_good):
                tree = _shape_to_tree(adj, weights)
                key = canonical_form(tree.graph)
                if key in found:
                    continue
                if only_good and not is_good(annotate(tree)):
                    continue
                aut = automorphism_count(tree.graph)
                orbit = factorial(n) // aut
                found[key] = StratumClass(tree, k, orbit, key)
    return sorted(found.values(), key=lambda c: (c.edge_count, c.canonical_key))


def good_classes(g: int, edge_count: Optional[int] = None) -> list[StratumClass]:
    """Good-tree classes of type (0, 2g+2)."""
    return unnumbered_classes(2 * g + 2, edge_count, only_good=True)


def build_T_lg(l: int, g: int) -> AnnotatedTree:
    """The star tree with a central vertex and l two-leaf satellites.

    The central vertex carries the leaves numbered 2l+1 .. 2g+2; satellite i
    carries the leaves 2i-1, 2i.  For l = 0 this is the edgeless tree with
    2g+2 leaves.
    """
    if g < 2 or not 0 <= l <= g:
        raise OutOfRange(f"need g >= 2 and 0 <= l <= g, got l={l}, g={g}")
    n = 2 * g + 2
    sigma: dict[int, int] = {}
    center = set(range(2 * l + 1, n + 1))
    parts = [center]
    for i in range(1, l + 1):
        f_center, f_sat = n + 2 * i - 1, n + 2 * i
        sigma[f_center] = f_sat
        sigma[f_sat] = f_center
        center.add(f_center)
        parts.append({2 * i - 1, 2 * i, f_sat})
    flags = set().union(*parts)
    graph = Graph(flags, sigma, parts, [0] * len(parts))
    numbered = NumberedGraph(graph, {k: k for k in range(1, n + 1)})
    return annotate(numbered)
