from __future__ import annotations

import itertools
from math import factorial

import pytest

from hyperstrata.errors import NotATree, OddLeafTotal, OutOfRange
from hyperstrata.graphs import (
    Graph,
    NumberedGraph,
    automorphism_count,
    betti1,
    canonical_form,
    genus,
    graph_type,
    is_stable,
)
from hyperstrata.trees import (
    annotate,
    build_T_lg,
    enumerate_trees,
    good_classes,
    is_good,
    orbit_representatives,
    stratum_dimension,
)


# --------------------------------------------------------------------------
# Independent generator: grow trees by splitting a vertex, deduplicate by
# canonical form.  Used as the enumeration oracle for n <= 7.
# --------------------------------------------------------------------------

def _split_vertex(t: NumberedGraph, v_index: int, moved: frozenset):
    g = t.graph
    part = g.vertices[v_index]
    stay = part - moved
    if len(stay) < 2 or len(moved) < 2:
        return None
    top = max(g.flags)
    f_old, f_new = top + 1, top + 2
    sigma = dict(g.sigma)
    sigma[f_old], sigma[f_new] = f_new, f_old
    parts = [set(p) for p in g.vertices]
    parts[v_index] = set(stay) | {f_old}
    parts.append(set(moved) | {f_new})
    graph = Graph(set(g.flags) | {f_old, f_new}, sigma, parts,
                  list(g.genus_labels) + [0])
    return NumberedGraph(graph, t.numbering)


def brute_force_tree_classes(n: int) -> dict[int, int]:
    """Class counts by edge number, from the vertex-splitting generator."""
    start = NumberedGraph(Graph(range(1, n + 1), {}, [set(range(1, n + 1))],
                                [0]),
                          {k: k for k in range(1, n + 1)})
    levels = {0: {canonical_form(start): start}}
    k = 0
    while True:
        nxt: dict[bytes, NumberedGraph] = {}
        for t in levels[k].values():
            for v_index, part in enumerate(t.graph.vertices):
                flags = sorted(part)
                for r in range(2, len(flags) - 1):
                    for moved in itertools.combinations(flags, r):
                        s = _split_vertex(t, v_index, frozenset(moved))
                        if s is not None:
                            nxt.setdefault(canonical_form(s), s)
        if not nxt:
            break
        k += 1
        levels[k] = nxt
    return {k: len(v) for k, v in levels.items()}


@pytest.mark.parametrize("n,expected", [
    (4, {0: 1, 1: 3}),
    (5, {0: 1, 1: 10, 2: 15}),
    (6, {0: 1, 1: 25, 2: 105, 3: 105}),
    (7, {0: 1, 1: 56, 2: 490, 3: 1260, 4: 945}),
])
def test_enumeration_agrees_with_independent_generator(n, expected, numbered):
    assert brute_force_tree_classes(n) == expected
    for k, count in expected.items():
        assert len(numbered(n, k)) == count
    assert len(numbered(n)) == sum(expected.values())


def test_single_class_for_three_leaves(numbered):
    assert len(numbered(3)) == 1
    t = numbered(3)[0]
    assert not t.graph.edges and len(t.graph.vertices) == 1


def test_enumeration_is_deterministic_and_stable(numbered):
    again = enumerate_trees(5)
    assert [canonical_form(t) for t in again] == \
        [canonical_form(t) for t in numbered(5)]
    for t in again:
        assert graph_type(t) == (0, 5)
        assert is_stable(t) and betti1(t) == 0


def test_enumeration_range_errors():
    with pytest.raises(OutOfRange):
        enumerate_trees(2)
    with pytest.raises(OutOfRange):
        enumerate_trees(13)
    with pytest.raises(OutOfRange):
        enumerate_trees(5, 3)


def test_annotate_one_edge_parities(numbered):
    seen = set()
    for t in numbered(6, 1):
        a = annotate(t)
        (e,) = t.graph.edges
        f = sorted(e)[0]
        profile = tuple(sorted(len(p) for p in t.graph.vertices))
        seen.add((profile, a.parity[f]))
        if profile == (4, 4):     # 3|3 split: odd edge, rho = 4 on each side
            assert a.rho == (4, 4)
    assert seen == {((3, 5), 0), ((4, 4), 1)}


def test_annotate_edgeless():
    a = build_T_lg(0, 3)
    assert a.rho == (8,) and a.nu == (0,) and a.internal == (False,)


def test_annotate_rejects_odd_totals_and_nontrees(numbered):
    with pytest.raises(OddLeafTotal):
        annotate(numbered(5)[0])
    loop = Graph([1, 2, 3, 4, 5], {1: 2, 2: 1}, [{1, 2, 3, 4, 5}], [0])
    with pytest.raises(NotATree):
        annotate(NumberedGraph(loop, {3: 1, 4: 2, 5: 3}))


def test_parity_and_rho_invariants(numbered, orbits):
    pools = [annotate(t) for t in numbered(6)]
    pools += [c.annotated() for c in orbits(8)] + \
             [c.annotated() for c in orbits(10)]
    for a in pools:
        g = a.graph
        n_leaves = len(g.leaves)
        odd_edges = sum(1 for e in g.edges if a.parity[sorted(e)[0]] == 1)
        assert sum(a.rho) == n_leaves + 2 * odd_edges
        assert all(r % 2 == 0 for r in a.rho)
        for e in g.edges:
            f1, f2 = sorted(e)
            assert a.parity[f1] == a.parity[f2]
        for f in g.leaves:
            assert a.parity[f] == 1


def test_is_good_on_star_trees():
    assert is_good(build_T_lg(0, 4))
    for g in (2, 3, 4, 5):
        for l in range(0, g):
            assert is_good(build_T_lg(l, g)), (l, g)
        assert not is_good(build_T_lg(g, g))


def test_good_tree_edge_bound_exhaustive(orbits):
    for g in (2, 3, 4):
        for cls in orbits(2 * g + 2):
            if is_good(cls.annotated()):
                assert cls.edge_count <= g - 1


def test_orbit_representatives_small(numbered):
    classes = orbit_representatives(numbered(4, 1))
    assert len(classes) == 1 and classes[0].orbit_size == 3
    classes = orbit_representatives(numbered(5, 1))
    assert len(classes) == 1 and classes[0].orbit_size == 10
    classes = orbit_representatives(numbered(5, 0))
    assert len(classes) == 1 and classes[0].orbit_size == 1


def test_orbit_sizes_match_explicit_grouping(numbered):
    for n in (4, 5, 6):
        classes = orbit_representatives(numbered(n))
        groups: dict[bytes, int] = {}
        for t in numbered(n):
            key = canonical_form(t.graph)
            groups[key] = groups.get(key, 0) + 1
        assert len(groups) == len(classes)
        for cls in classes:
            assert groups[cls.canonical_key] == cls.orbit_size
            aut = automorphism_count(cls.representative.graph)
            assert cls.orbit_size * aut == factorial(n)
            assert factorial(n) % cls.orbit_size == 0


def test_unnumbered_route_matches_orbit_route(numbered, orbits):
    for n in (4, 5, 6, 7):
        via_shapes = orbits(n)
        via_groups = orbit_representatives(numbered(n))
        assert [c.canonical_key for c in via_shapes] == \
            [c.canonical_key for c in via_groups]
        assert [c.orbit_size for c in via_shapes] == \
            [c.orbit_size for c in via_groups]
        assert sum(c.orbit_size for c in via_shapes) == len(numbered(n))


def test_stratum_dimension(numbered):
    assert stratum_dimension(numbered(5, 0)[0]) == 2
    for t in numbered(6, 3):
        assert stratum_dimension(t) == 0
        assert all(len(p) == 3 for p in t.graph.vertices)
    for l, g in [(0, 2), (2, 4), (3, 4), (4, 4)]:
        assert stratum_dimension(build_T_lg(l, g)) == 2 * g - l - 1


def test_build_T_lg_layout():
    t = build_T_lg(2, 4)
    g = t.graph
    assert graph_type(g) == (0, 10)
    assert len(g.vertices) == 3 and len(g.edges) == 2
    sizes = sorted(len(p) for p in g.vertices)
    assert sizes == [3, 3, 8]
    # satellite i carries leaves 2i-1, 2i
    for i in (1, 2):
        v = g.vertex_of(next(f for f, n in t.tree.numbering.items()
                             if n == 2 * i))
        nums = sorted(t.tree.numbering[f] for f in g.vertices[v]
                      if g.sigma[f] == f)
        assert nums == [2 * i - 1, 2 * i]
    assert t.rho == (6, 2, 2)

    edgeless = build_T_lg(0, 3)
    assert not edgeless.graph.edges and len(edgeless.graph.leaves) == 8

    with pytest.raises(OutOfRange):
        build_T_lg(3, 2)
    with pytest.raises(OutOfRange):
        build_T_lg(0, 1)


def test_good_classes_search_empty_at_g_edges():
    for g in (2, 3, 4, 5, 6):
        assert good_classes(g, edge_count=g) == []
        assert good_classes(g, edge_count=g - 1)


def test_betti1_zero_for_all_enumerated(numbered):
    for n in (4, 5, 6):
        for t in numbered(n):
            assert betti1(t) == 0


def test_genus_zero_for_all_enumerated(numbered):
    for t in numbered(6):
        assert genus(t) == 0
