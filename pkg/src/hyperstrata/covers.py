"""From pointed rational trees to stable genus-g dual graphs.

A stable tree with 2g+2 leaves is the dual graph of a pointed rational curve
whose branched double cover is a genus-g curve.  The cover's dual graph is
built vertex by vertex (one vertex of genus (rho-2)/2 over each tree vertex,
or two rational vertices where rho = 0), with one edge over each odd edge
and two over each even edge, and then stabilized.  Leaves of the tree are
branch points and contribute no flags.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import OddLeafTotal, OutOfRange
from .graphs import (
    Graph,
    canonical_form,
    genus,
    stabilize,
)
from .trees import AnnotatedTree, unnumbered_classes


def admissible_cover_graph(t: AnnotatedTree, trace: list[str] | None = None) -> Graph:
    """The dual graph of the double cover, before stabilization.

    A tree vertex with rho >= 2 lifts to one vertex of genus (rho-2)/2; a
    vertex with rho = 0 lifts to two rational vertices.  Odd edges are
    ramified and lift to a single edge; even edges lift to a pair of edges,
    routed to keep the cover connected.
    """
    g = t.graph
    if len(g.leaves) % 2:
        raise OddLeafTotal("the double cover needs an even number of leaves")

    parts: list[set[int]] = []
    labels: list[int] = []
    covers: list[tuple[int, ...]] = []
    for i, rho in enumerate(t.rho):
        if rho == 0:
            covers.append((len(parts), len(parts) + 1))
            parts.extend((set(), set()))
            labels.extend((0, 0))
            if trace is not None:
                trace.append(f"vertex {i}: rho=0, lifts to two rational vertices")
        else:
            covers.append((len(parts),))
            parts.append(set())
            labels.append((rho - 2) // 2)
            if trace is not None:
                trace.append(f"vertex {i}: rho={rho}, lifts to one vertex "
                             f"of genus {(rho - 2) // 2}")

    sigma: dict[int, int] = {}
    counter = [0]

    def new_edge(u_part: int, v_part: int) -> None:
        f1, f2 = counter[0] + 1, counter[0] + 2
        counter[0] += 2
        sigma[f1] = f2
        sigma[f2] = f1
        parts[u_part].add(f1)
        parts[v_part].add(f2)

    for e in sorted(g.edges, key=sorted):
        f1, f2 = sorted(e)
        u, v = g.vertex_of(f1), g.vertex_of(f2)
        cu, cv = covers[u], covers[v]
        if t.parity[f1] == 1:
            new_edge(cu[0], cv[0])
            if trace is not None:
                trace.append(f"edge {sorted(e)}: odd, one edge over it")
        else:
            if len(cu) == 1 and len(cv) == 1:
                new_edge(cu[0], cv[0])
                new_edge(cu[0], cv[0])
            elif len(cu) == 2 and len(cv) == 1:
                new_edge(cu[0], cv[0])
                new_edge(cu[1], cv[0])
            elif len(cu) == 1 and len(cv) == 2:
                new_edge(cu[0], cv[0])
                new_edge(cu[0], cv[1])
            else:
                new_edge(cu[0], cv[0])
                new_edge(cu[1], cv[1])
            if trace is not None:
                trace.append(f"edge {sorted(e)}: even, two edges over it")

    flags = set().union(*parts) if parts else set()
    return Graph(flags, sigma, parts, labels)


def pushforward(t: AnnotatedTree, trace: list[str] | None = None) -> Graph:
    """Stabilized cover graph: the genus-g dual graph of the image curve."""
    cover = admissible_cover_graph(t, trace)
    before = len(cover.edges)
    result = stabilize(cover)
    if trace is not None:
        spliced = before - len(result.edges)
        if spliced:
            trace.append(f"stabilize: spliced out {spliced} two-flag "
                         "rational vertices")
        trace.append(f"image: genus {genus(result)}, "
                     f"{len(result.vertices)} vertices, "
                     f"{len(result.edges)} edges")
    return result


def rational_component_count(t: AnnotatedTree) -> int:
    """Number of rational components of the image curve.

    Twice the number of rho = 0 vertices plus the number of internal
    vertices with rho = 2; external rho = 2 vertices lift to two-flag
    vertices that disappear under stabilization.
    """
    if len(t.graph.leaves) % 2:
        raise OddLeafTotal("rational components need an even leaf count")
    zero = sum(1 for r in t.rho if r == 0)
    two = sum(1 for r, inner in zip(t.rho, t.internal) if inner and r == 2)
    return 2 * zero + two


def in_filtration(t: AnnotatedTree, k: int) -> bool:
    """True iff the image curve has at most k rational components."""
    if k < 0:
        raise OutOfRange("filtration level must be nonnegative")
    return rational_component_count(t) <= k


@dataclass(frozen=True)
class NodeBoundReport:
    """Exhaustive audit of the node bound over one filtration level."""

    g: int
    k: int
    bound: int                      # g + k - 1
    classes_by_edges: dict[int, int]
    max_edges: int
    edge_growth_ok: bool            # image never has fewer edges than the tree
    ok: bool


def node_bound_report(g: int, k: int) -> NodeBoundReport:
    """Check that trees mapping into filtration level k have few nodes.

    Enumerates all unnumbered classes of type (0, 2g+2), keeps those whose
    image has at most k rational components, and verifies the edge count
    bound g + k - 1 together with edge growth under the pushforward.
    """
    if not 2 <= g <= 4:
        raise OutOfRange("exhaustive node audit supports 2 <= g <= 4")
    if k < 0:
        raise OutOfRange("filtration level must be nonnegative")
    bound = g + k - 1
    by_edges: dict[int, int] = {}
    growth_ok = True
    for cls in unnumbered_classes(2 * g + 2):
        t = cls.annotated()
        if not in_filtration(t, k):
            continue
        by_edges[cls.edge_count] = by_edges.get(cls.edge_count, 0) + 1
        if len(pushforward(t).edges) < cls.edge_count:
            growth_ok = False
    max_edges = max(by_edges, default=0)
    return NodeBoundReport(g, k, bound, by_edges, max_edges,
                           growth_ok, growth_ok and max_edges <= bound)


def verify_injectivity(g: int) -> bool:
    """Distinct unnumbered tree classes have distinct image dual graphs."""
    if not 2 <= g <= 3:
        raise OutOfRange("exhaustive injectivity check supports g <= 3")
    forms = set()
    classes = unnumbered_classes(2 * g + 2)
    for cls in classes:
        forms.add(canonical_form(pushforward(cls.annotated())))
    return len(forms) == len(classes)
