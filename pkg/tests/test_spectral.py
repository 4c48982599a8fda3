from __future__ import annotations

from fractions import Fraction
from math import factorial

import pytest

from hyperstrata.errors import LevelZero, OutOfRange
from hyperstrata.graphs import automorphism_count
from hyperstrata.lie import basis_vector, lyndon_words
from hyperstrata.spectral import (
    AB,
    Certificate,
    VSpaceElement,
    betti_m0n,
    certify_nonvanishing,
    d1,
    e1_table,
    f1_table,
    omega,
    stratification_epoly_check,
    v_space_dimension,
    verify_leading_terms,
)
from hyperstrata.trees import build_T_lg


def test_omega():
    w2 = omega(2)
    assert w2.l == 2 and w2.vector == basis_vector("abb", AB)
    assert v_space_dimension(2, 2) == 1
    for g in (2, 3, 4, 5, 6, 7, 8):
        assert v_space_dimension(g, g) == 1
    with pytest.raises(OutOfRange):
        omega(1)


def test_d1_base_cases_exact():
    assert d1(omega(2)).vector == basis_vector("aaab", AB).scale(2)
    assert d1(omega(3)).vector == basis_vector("aabab", AB).scale(2)


def test_d1_multidegree_shift():
    x = d1(omega(4))
    assert x.l == 3 and x.vector.multidegree() == (3, 3)
    bottom = d1(d1(omega(2)))     # level 0, necessarily zero
    assert bottom.l == 0 and bottom.is_zero()
    with pytest.raises(LevelZero):
        d1(bottom)


def test_d1_squares_to_zero_on_all_components():
    for g in range(2, 7):
        for l in range(2, g + 1):
            md = (2 * g - 2 * l + 1, l)
            for w in lyndon_words(AB, md):
                x = VSpaceElement(g, l, basis_vector(w, AB))
                assert d1(d1(x)).is_zero(), (g, l, w)


def test_leading_terms_follow_parity_split():
    for g in range(2, 9):
        rep = verify_leading_terms(g)
        assert rep.ok
        if g == 2:
            assert dict(rep.expansion.terms) == \
                {("w", AB.key("aaab")): Fraction(2)}
        elif g % 2 == 0:
            assert rep.coefficient_a3 == 2
            assert rep.coefficient_a2bab == g - 2
        else:
            assert rep.coefficient_a3 == 0
            assert rep.coefficient_a2bab == g - 1
        assert all(c.denominator == 1 for c in rep.expansion.terms.values())


def test_leading_terms_specific_values():
    g4 = verify_leading_terms(4)
    assert g4.coefficient_a3 == 2 and g4.coefficient_a2bab == 2
    g5 = verify_leading_terms(5)
    assert g5.coefficient_a3 == 0 and g5.coefficient_a2bab == 4


def test_certificate_structure():
    cert = certify_nonvanishing(2)
    assert isinstance(cert, Certificate) and cert.passed
    assert cert.d1_omega.vector == basis_vector("aaab", AB).scale(2)
    assert cert.d1_d1_omega.is_zero()
    names = [c.name for c in cert.checks]
    assert names == ["top_level_is_a_line", "d1_omega_nonzero",
                     "d1_d1_omega_zero", "target_stratum_good",
                     "no_good_trees_with_g_edges"]
    cert3 = certify_nonvanishing(3)
    assert cert3.d1_omega.vector == basis_vector("aabab", AB).scale(2)
    with pytest.raises(OutOfRange):
        certify_nonvanishing(1)


def test_betti_numbers():
    assert betti_m0n(3) == [1]
    assert betti_m0n(4) == [1, 2]
    assert betti_m0n(5) == [1, 5, 6]
    for n in range(3, 10):
        assert betti_m0n(n)[-1] == factorial(n - 2)
        assert betti_m0n(n)[0] == 1


def test_e1_table_four_points():
    # thrice-punctured sphere: H^0 = 1, H^1 = 2, so compact supports give
    # H^1_c = 2 and H^2_c = 1; the three boundary points sit in cell (-1, 1)
    table = e1_table(4)
    assert table.nonzero_cells() == [(-1, 1, 3), (0, 1, 2), (0, 2, 1)]


def test_e1_weight_bound_and_corner():
    for m in (4, 5, 6, 7):
        table = e1_table(m)
        for p, q, dim in table.nonzero_cells():
            assert q - p <= 2 * (m - 3)
            assert q >= m - 3
        # the most degenerate strata are points; their count fills the
        # corner cell (p, q) = (-(m-3), m-3)
        from hyperstrata.trees import enumerate_trees
        corner = table.dim(-(m - 3), m - 3)
        assert corner == len(enumerate_trees(m, m - 3))
    with pytest.raises(OutOfRange):
        e1_table(3)


def test_e1_euler_characteristic_matches_epoly():
    # row q = m-3+k of the first page computes the compact space's degree-2k
    # cohomology after taking the alternating sum along p
    for m in (4, 5, 6, 7):
        table = e1_table(m)
        poincare = stratification_epoly_check(m).coefficients
        for k in range(m - 2):
            q = m - 3 + k
            total = sum((-1) ** p * table.dim(p, q)
                        for p in range(-(m - 3), 1))
            expected = (-1) ** (k - (m - 3)) * poincare[k]
            assert total == expected, (m, k)


def test_f1_tables_respect_bounds():
    for g in (2, 3, 4):
        table = f1_table(g)
        cells = table.nonzero_cells()
        assert cells
        for p, q, dim in cells:
            assert 1 - g <= p <= 0
            assert 2 * g - 1 <= q <= 4 * g - 2
            assert p + q >= g
    with pytest.raises(OutOfRange):
        f1_table(5)


def test_f1_two_realizes_both_p_columns():
    table = f1_table(2)
    ps = {p for p, q, d in table.nonzero_cells()}
    assert ps == {-1, 0}
    # the good one-edge classes of type (0,6) are the 2|4 and 3|3 splits,
    # with orbits 15 and 10; cell (-1, 3) collects their bottom compact
    # degrees: 15*6 + 10*4
    assert table.dim(-1, 3) == 130


def test_epoly_known_values():
    assert stratification_epoly_check(4).coefficients == (1, 1)
    assert stratification_epoly_check(5).coefficients == (1, 5, 1)
    assert stratification_epoly_check(6).coefficients == (1, 16, 16, 1)
    for m in (4, 5, 6, 7, 8):
        rep = stratification_epoly_check(m)
        assert rep.ok
        assert rep.coefficients == rep.coefficients[::-1]
        assert rep.coefficients[0] == 1
    with pytest.raises(OutOfRange):
        stratification_epoly_check(9)


def test_star_tree_automorphism_orders():
    for g in range(2, 5):
        for l in range(0, g + 1):
            t = build_T_lg(l, g)
            root = next(f for f, n in t.tree.numbering.items()
                        if n == 2 * g + 2)
            expected = factorial(2 * g - 2 * l + 1) * factorial(l) * 2 ** l
            assert automorphism_count(t.graph, [root]) == expected
