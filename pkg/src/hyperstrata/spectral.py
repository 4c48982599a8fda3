"""First-page spectral data and the nonvanishing certificate.

The weight-(l) piece of the top compactly-supported row over the star-tree
strata is modelled by the multidegree (2g-2l+1, l) component of the free Lie
superalgebra on one odd letter a and one even letter b.  The first-page
differential substitutes occurrences of b by the bracket [a, a], one at a
time, with Koszul position signs: the substitution is an odd operator, so
replacing the letter at position p carries the parity of the letters to its
left, computed in the companion model where both letters are odd.  In that
model the map is an odd derivation (b maps to [a, a], a to zero), so its
square vanishes identically; the a-degree of these components is odd, hence
both models share the same Lyndon words and coefficients transfer through
the word-indexed bases.  On the top generator B(ab^g) the rule produces the
alternating sum over the g occurrences of b with signs (-1)^(i-1).

The certificate for genus g checks, with witnesses: the top space is a line
spanned by B(ab^g); its differential is nonzero; applying the differential
twice gives zero; the receiving star stratum is a good tree with g-1 edges;
and no good tree has g edges, so nothing maps onto the receiving cell.
Together these exhibit a nonzero second-page class in bidegree
(-g+1, 2g-1).

Dimension tables for the full and good-tree first pages are orbit-weighted
sums over unnumbered stratum classes, using the classical product formula
for the cohomology of the open strata.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FailedCertificate, LevelZero, OutOfRange
from .lie import (
    GradedAlphabet,
    LieVector,
    _bracket_keys,
    _std_tree,
    dimension,
)
from .trees import (
    StratumClass,
    _family_profile,
    _laminar_families,
    build_T_lg,
    good_classes,
    is_good,
    unnumbered_classes,
)

AB = GradedAlphabet(("a", "b"), {"a": 1, "b": 0})
# Sign model for the differential: both letters odd, so that substituting
# one occurrence of b is an odd derivation (see the module docstring).
AB_ODD = GradedAlphabet(("a", "b"), {"a": 1, "b": 1})
_A = AB.index("a")
_B = AB.index("b")


@dataclass(frozen=True)
class VSpaceElement:
    """An element of the level-l weight space for genus g: a Lie vector of
    multidegree (2g-2l+1, l) over {a odd, b even}."""

    g: int
    l: int
    vector: LieVector

    def __post_init__(self):
        if self.g < 2 or not 0 <= self.l <= self.g:
            raise OutOfRange(f"level {self.l} outside 0..{self.g}")
        expected = (2 * self.g - 2 * self.l + 1, self.l)
        md = self.vector.multidegree()
        if md is not None and md != expected:
            raise OutOfRange(f"multidegree {md}, expected {expected}")

    def is_zero(self) -> bool:
        return self.vector.is_zero()

    def __repr__(self) -> str:
        return f"VSpaceElement(g={self.g}, l={self.l}, {self.vector!r})"


def v_space_dimension(l: int, g: int) -> int:
    """dim of the level-l space: Lyndon count in multidegree (2g-2l+1, l)."""
    if g < 2 or not 0 <= l <= g:
        raise OutOfRange(f"level {l} outside 0..{g}")
    return dimension(AB, (2 * g - 2 * l + 1, l))


def omega(g: int) -> VSpaceElement:
    """The generator B(ab^g) of the one-dimensional top level."""
    if g < 2:
        raise OutOfRange("need g >= 2")
    word = (_A,) + (_B,) * g
    vec = LieVector(AB, {("w", word): Fraction(1)})
    return VSpaceElement(g, g, vec)


def _substitute(node, target: int, counter: list[int]):
    """Replace the target-th leaf (in left-to-right order) by [a, a]."""
    if isinstance(node, int):
        idx = counter[0]
        counter[0] += 1
        if idx == target:
            return (_A, _A)
        return node
    return (_substitute(node[0], target, counter),
            _substitute(node[1], target, counter))


def _normalize_node(degrees, node) -> dict:
    if isinstance(node, int):
        return {("w", (node,)): 1}
    left = _normalize_node(degrees, node[0])
    right = _normalize_node(degrees, node[1])
    acc: dict = {}
    for k1, c1 in left.items():
        for k2, c2 in right.items():
            for key, c in _bracket_keys(degrees, k1, k2):
                acc[key] = acc.get(key, 0) + c1 * c2 * c
    return {k: c for k, c in acc.items() if c}


def d1(x: VSpaceElement) -> VSpaceElement:
    """The first-page differential.

    For each basis word, substitute each occurrence of b by [a, a] inside
    the standard bracketing and sum with Koszul position signs -(-1)^p
    (p the 0-indexed position, all letters counting as odd), normalizing in
    the companion all-odd model.  The square of this map is zero because it
    is an odd derivation there; on B(ab^g) it reduces to the alternating
    occurrence signs (-1)^(i-1)."""
    if x.l == 0:
        raise LevelZero("no even letters left to substitute")
    acc: dict = {}
    for (kind, word), coeff in x.vector.terms.items():
        if kind != "w":
            raise OutOfRange("square basis keys cannot occur at odd a-degree")
        tree = _std_tree(word)
        for pos, letter in enumerate(word):
            if letter != _B:
                continue
            expr = _substitute(tree, pos, [0])
            sign = -1 if pos % 2 == 0 else 1
            for key, c in _normalize_node(AB_ODD.degrees, expr).items():
                acc[key] = acc.get(key, Fraction(0)) + coeff * sign * c
    return VSpaceElement(x.g, x.l - 1, LieVector(AB, acc))


@dataclass(frozen=True)
class LeadingTermReport:
    """Expansion of d1 applied to the top generator, with the expected
    leading coefficients on a^3 b^(g-1) and a^2 b a b^(g-2)."""

    g: int
    expansion: LieVector
    coefficient_a3: Fraction      # on a^3 b^(g-1)
    coefficient_a2bab: Fraction   # on a^2 b a b^(g-2)
    ok: bool


def verify_leading_terms(g: int) -> LeadingTermReport:
    """Check the closed-form leading behaviour of d1 on the top generator:
    coefficients (2, g-2) for even g and (0, g-1) for odd g, with every
    further term on a lexicographically greater Lyndon word."""
    if not 2 <= g <= 10:
        raise OutOfRange("supported range is 2 <= g <= 10")
    image = d1(omega(g)).vector
    key_a3 = (_A, _A, _A) + (_B,) * (g - 1)
    c_a3 = image.terms.get(("w", key_a3), Fraction(0))
    if g == 2:
        ok = dict(image.terms) == {("w", key_a3): Fraction(2)}
        return LeadingTermReport(g, image, c_a3, Fraction(0), ok)
    key_mid = (_A, _A, _B, _A) + (_B,) * (g - 2)
    c_mid = image.terms.get(("w", key_mid), Fraction(0))
    if g % 2 == 0:
        ok = c_a3 == 2 and c_mid == g - 2
    else:
        ok = c_a3 == 0 and c_mid == g - 1
    for (kind, w), c in image.terms.items():
        if kind != "w":
            ok = False
        elif w not in (key_a3, key_mid) and w <= key_mid:
            ok = False
        if c.denominator != 1:
            ok = False
    return LeadingTermReport(g, image, c_a3, c_mid, ok)


@dataclass(frozen=True)
class CertificateCheck:
    name: str
    passed: bool
    witness: str


@dataclass(frozen=True)
class Certificate:
    """Machine-checkable evidence that the second page is nonzero in
    bidegree (-g+1, 2g-1), i.e. the compactly supported cohomology of the
    good-tree locus is nonzero in degree g."""

    g: int
    omega: VSpaceElement
    d1_omega: VSpaceElement
    d1_d1_omega: VSpaceElement
    checks: tuple[CertificateCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def certify_nonvanishing(g: int) -> Certificate:
    """Run the five certificate checks; raise FailedCertificate (carrying
    the partial certificate) if any fails."""
    if not 2 <= g <= 10:
        raise OutOfRange("supported range is 2 <= g <= 10")
    w = omega(g)
    dw = d1(w)
    ddw = d1(dw)
    checks = []

    dim_top = v_space_dimension(g, g)
    checks.append(CertificateCheck(
        "top_level_is_a_line", dim_top == 1,
        f"dim of multidegree (1,{g}) component = {dim_top}"))

    checks.append(CertificateCheck(
        "d1_omega_nonzero", not dw.is_zero(),
        f"d1(omega_{g}) has {len(dw.vector.terms)} terms"))

    checks.append(CertificateCheck(
        "d1_d1_omega_zero", ddw.is_zero(),
        f"d1(d1(omega_{g})) has {len(ddw.vector.terms)} terms"))

    target = build_T_lg(g - 1, g)
    target_ok = is_good(target) and target.edge_count == g - 1
    checks.append(CertificateCheck(
        "target_stratum_good", target_ok,
        f"star tree at level {g - 1}: good={is_good(target)}, "
        f"edges={target.edge_count} (bound {g - 1})"))

    offenders = good_classes(g, edge_count=g)
    checks.append(CertificateCheck(
        "no_good_trees_with_g_edges", not offenders,
        f"exhaustive search found {len(offenders)} good trees "
        f"with {g} edges"))

    cert = Certificate(g, w, dw, ddw, tuple(checks))
    if not cert.passed:
        failed = [c.name for c in checks if not c.passed]
        raise FailedCertificate(f"checks failed: {', '.join(failed)}", cert)
    return cert


# --------------------------------------------------------------------------
# Betti numbers and dimension tables.
# --------------------------------------------------------------------------

def _poly_mul(p: list[int], q: list[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def betti_m0n(n: int) -> list[int]:
    """Betti numbers of the moduli space of n distinct points on a line
    (n >= 3): coefficients of prod_{k=2}^{n-2} (1 + k t)."""
    if not 3 <= n <= 12:
        raise OutOfRange("supported range is 3 <= n <= 12")
    poly = [1]
    for k in range(2, n - 1):
        poly = _poly_mul(poly, [1, k])
    return poly


def _hc_poly(k: int) -> list[int]:
    """Compactly supported Betti numbers of the open k-pointed stratum
    factor, as coefficients by degree: dim H^j_c = dim H^(2(k-3)-j)."""
    betti = betti_m0n(k)
    d = k - 3
    out = [0] * (2 * d + 1)
    for j in range(d, 2 * d + 1):
        out[j] = betti[2 * d - j]
    return out


@dataclass(frozen=True)
class SpectralCell:
    dimension: int
    strata: tuple[tuple[StratumClass, int], ...]  # (class, dim contributed)


@dataclass(frozen=True)
class SpectralTable:
    """Dimensions of first-page cells indexed by (p, q), with stratum
    provenance.  kind "E" is the full page for n-pointed rational curves;
    kind "F" restricts to good trees."""

    kind: str
    parameter: int
    cells: dict

    def dim(self, p: int, q: int) -> int:
        cell = self.cells.get((p, q))
        return cell.dimension if cell else 0

    def nonzero_cells(self) -> list[tuple[int, int, int]]:
        return sorted((p, q, c.dimension) for (p, q), c in self.cells.items())


def _table_from_classes(kind: str, parameter: int,
                        classes: list[StratumClass]) -> SpectralTable:
    cells: dict[tuple[int, int], dict] = {}
    for cls in classes:
        poly = [1]
        for part in cls.representative.graph.vertices:
            poly = _poly_mul(poly, _hc_poly(len(part)))
        k = cls.edge_count
        for j, coeff in enumerate(poly):
            if not coeff:
                continue
            p, q = -k, j + k
            cell = cells.setdefault((p, q), {"dim": 0, "strata": []})
            contributed = cls.orbit_size * coeff
            cell["dim"] += contributed
            cell["strata"].append((cls, contributed))
    packed = {pq: SpectralCell(c["dim"], tuple(c["strata"]))
              for pq, c in cells.items()}
    return SpectralTable(kind, parameter, packed)


def e1_table(m: int) -> SpectralTable:
    """First page of the stratification spectral sequence for m-pointed
    rational curves: cell (p, q) collects degree p+q compactly supported
    cohomology over the numbered strata with -p edges."""
    if not 4 <= m <= 10:
        raise OutOfRange("supported range is 4 <= m <= 10")
    table = _table_from_classes("E", m, unnumbered_classes(m))
    for (p, q), cell in table.cells.items():
        if cell.dimension and q - p > 2 * (m - 3):
            raise OutOfRange(f"cell ({p},{q}) violates the weight bound")
    return table


def f1_table(g: int) -> SpectralTable:
    """Good-tree truncation of the first page for 2g+2 marked points.

    Nonzero cells are confined to 1-g <= p <= 0, 2g-1 <= q <= 4g-2, and
    vanish when p + q < g."""
    if not 2 <= g <= 4:
        raise OutOfRange("supported range is 2 <= g <= 4")
    table = _table_from_classes("F", g, good_classes(g))
    for (p, q), cell in table.cells.items():
        if not cell.dimension:
            continue
        if not (1 - g <= p <= 0 and 2 * g - 1 <= q <= 4 * g - 2):
            raise OutOfRange(f"cell ({p},{q}) violates the good-tree bounds")
        if p + q < g:
            raise OutOfRange(f"cell ({p},{q}) below total degree {g}")
    return table


@dataclass(frozen=True)
class EPolyReport:
    """Sum over all numbered strata of the product of per-vertex counting
    polynomials prod_{j=2}^{k-2} (q - j); for the compact space this must be
    a palindromic polynomial with nonnegative coefficients and constant
    term 1."""

    m: int
    coefficients: tuple[int, ...]
    ok: bool


def _epoly(k: int) -> list[int]:
    poly = [1]
    for j in range(2, k - 1):
        poly = _poly_mul(poly, [-j, 1])
    return poly


def stratification_epoly_check(m: int) -> EPolyReport:
    """Assemble the counting polynomial of the compact space from its open
    strata and check positivity, palindromy, and constant term 1."""
    if not 4 <= m <= 8:
        raise OutOfRange("supported range is 4 <= m <= 8")
    total = [0] * (m - 2)
    for family in _laminar_families(m):
        poly = [1]
        for size in _family_profile(m, family):
            poly = _poly_mul(poly, _epoly(size))
        for i, c in enumerate(poly):
            total[i] += c
    while len(total) > 1 and total[-1] == 0:
        total.pop()
    coeffs = tuple(total)
    ok = (all(c >= 0 for c in coeffs)
          and coeffs == coeffs[::-1]
          and coeffs[0] == 1
          and len(coeffs) == m - 2)
    return EPolyReport(m, coeffs, ok)
