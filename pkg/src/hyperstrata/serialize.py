"""JSON, text, and CSV codecs.

Every structured payload carries ``format: 1``.  Canonical serialization
sorts all arrays, so equal graphs produce byte-identical files.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import FormatError
from .graphs import Graph, NumberedGraph
from .lie import GradedAlphabet, LieVector
from .spectral import Certificate, SpectralTable
from .trees import AnnotatedTree, annotate

FORMAT = 1


def _sorted_vertex_order(g: Graph) -> list[int]:
    keyed = sorted(range(len(g.vertices)),
                   key=lambda i: sorted(g.vertices[i]))
    return keyed


def graph_to_json(g) -> dict:
    numbered = isinstance(g, NumberedGraph)
    graph = g.graph if numbered else g
    order = _sorted_vertex_order(graph)
    pairs = sorted(sorted(e) for e in graph.edges)
    payload = {
        "format": FORMAT,
        "flags": sorted(graph.flags),
        "involution": [[a, b] for a, b in pairs],
        "vertices": [sorted(graph.vertices[i]) for i in order],
        "genus": [graph.genus_labels[i] for i in order],
    }
    if numbered:
        payload["leaf_numbering"] = {str(f): n
                                     for f, n in sorted(g.numbering.items())}
    return payload


def graph_from_json(payload: dict):
    try:
        if payload.get("format") != FORMAT:
            raise FormatError(f"unsupported format {payload.get('format')!r}")
        flags = [int(f) for f in payload["flags"]]
        sigma = {}
        for a, b in payload["involution"]:
            sigma[int(a)] = int(b)
            sigma[int(b)] = int(a)
        vertices = [[int(f) for f in part] for part in payload["vertices"]]
        genus_labels = [int(x) for x in payload["genus"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed graph payload: {exc}") from exc
    graph = Graph(flags, sigma, vertices, genus_labels)
    if "leaf_numbering" in payload:
        numbering = {int(f): int(n)
                     for f, n in payload["leaf_numbering"].items()}
        return NumberedGraph(graph, numbering)
    return graph


def annotated_to_json(t: AnnotatedTree) -> dict:
    payload = graph_to_json(t.tree)
    g = t.graph
    order = _sorted_vertex_order(g)
    pairs = sorted(sorted(e) for e in g.edges)
    payload["parity"] = {str(i): t.parity[pair[0]]
                         for i, pair in enumerate(pairs)}
    payload["rho"] = [t.rho[i] for i in order]
    payload["nu"] = [t.nu[i] for i in order]
    payload["internal"] = [t.internal[i] for i in order]
    return payload


def annotated_from_json(payload: dict) -> AnnotatedTree:
    tree = graph_from_json(payload)
    if not isinstance(tree, NumberedGraph):
        raise FormatError("annotated trees need a leaf numbering")
    t = annotate(tree)
    check = annotated_to_json(t)
    for field in ("parity", "rho", "nu"):
        if field in payload and payload[field] != check[field]:
            raise FormatError(f"stored {field} disagrees with the tree")
    return t


def _coeff_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def lie_vector_to_text(v: LieVector) -> str:
    """Terms ``c·w`` (squares as ``c·(w)^[2]``) sorted by key, joined by
    spaces; the zero vector prints as ``0``."""
    if v.is_zero():
        return "0"
    bits = []
    for (kind, w), c in v.items():
        word = v.alphabet.text(w)
        body = word if kind == "w" else f"({word})^[2]"
        bits.append(f"{_coeff_str(c)}·{body}")
    return " ".join(bits)


def lie_vector_from_text(text: str, alphabet: GradedAlphabet) -> LieVector:
    text = text.strip()
    if text == "0":
        return LieVector(alphabet, {})
    terms = {}
    for piece in text.split():
        if "·" not in piece:
            raise FormatError(f"bad term {piece!r}")
        coeff_s, body = piece.split("·", 1)
        try:
            coeff = Fraction(coeff_s)
        except ValueError as exc:
            raise FormatError(f"bad coefficient {coeff_s!r}") from exc
        if body.endswith("^[2]"):
            word = body[:-4]
            if not (word.startswith("(") and word.endswith(")")):
                raise FormatError(f"bad square term {piece!r}")
            key = ("sq", alphabet.key(word[1:-1]))
        else:
            key = ("w", alphabet.key(body))
        terms[key] = terms.get(key, Fraction(0)) + coeff
    return LieVector(alphabet, terms)


def parse_bracket_expr(text: str):
    """Parse ``[[a,b],[a,a]]`` into nested pairs of letters."""
    pos = [0]
    s = text.strip()

    def parse():
        if pos[0] >= len(s):
            raise FormatError("unexpected end of expression")
        ch = s[pos[0]]
        if ch == "[":
            pos[0] += 1
            left = parse()
            if pos[0] >= len(s) or s[pos[0]] != ",":
                raise FormatError(f"expected ',' at offset {pos[0]}")
            pos[0] += 1
            right = parse()
            if pos[0] >= len(s) or s[pos[0]] != "]":
                raise FormatError(f"expected ']' at offset {pos[0]}")
            pos[0] += 1
            return (left, right)
        if ch.isalnum():
            pos[0] += 1
            return ch
        raise FormatError(f"unexpected character {ch!r} at offset {pos[0]}")

    expr = parse()
    if pos[0] != len(s):
        raise FormatError(f"trailing input at offset {pos[0]}")
    return expr


def parse_alphabet(spec: str) -> GradedAlphabet:
    """Parse ``a:odd,b:even`` into a graded alphabet (order as listed)."""
    letters, degree = [], {}
    for item in spec.split(","):
        if ":" not in item:
            raise FormatError(f"bad alphabet item {item!r}")
        name, par = item.split(":", 1)
        name = name.strip()
        par = par.strip().lower()
        if par not in ("odd", "even", "0", "1"):
            raise FormatError(f"bad parity {par!r}")
        letters.append(name)
        degree[name] = 1 if par in ("odd", "1") else 0
    try:
        return GradedAlphabet(tuple(letters), degree)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def table_to_csv(table: SpectralTable) -> str:
    lines = ["p,q,dim,strata"]
    for (p, q) in sorted(table.cells):
        cell = table.cells[(p, q)]
        strata = ";".join(
            f"{cls.orbit_size}x[{'+'.join(map(str, cls.profile()))}]={contrib}"
            for cls, contrib in sorted(
                cell.strata, key=lambda t: (t[0].canonical_key,)))
        lines.append(f"{p},{q},{cell.dimension},{strata}")
    return "\n".join(lines) + "\n"


def certificate_to_json(cert: Certificate) -> dict:
    named = {c.name: c for c in cert.checks}
    return {
        "format": FORMAT,
        "genus": cert.g,
        "omega": lie_vector_to_text(cert.omega.vector),
        "d1_omega": lie_vector_to_text(cert.d1_omega.vector),
        "d1d1_zero": cert.d1_d1_omega.is_zero(),
        "leading_terms": {
            "a3_power": _coeff_str(cert.d1_omega.vector.coefficient(
                "aaa" + "b" * (cert.g - 1))),
            "a2bab_power": _coeff_str(cert.d1_omega.vector.coefficient(
                "aab" + "a" + "b" * (cert.g - 2))) if cert.g >= 3 else "0",
        },
        "good_stratum_check": named["target_stratum_good"].passed,
        "f1_cell_empty": named["no_good_trees_with_g_edges"].passed,
        "checks": [{"name": c.name, "passed": c.passed, "witness": c.witness}
                   for c in cert.checks],
        "passed": cert.passed,
    }


def dumps(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
