from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from motocell.cells import (
    EMPTY,
    GM,
    POINT,
    CellInventory,
    SignedTatePolynomial,
    even_pure_lift,
    leveled_purity,
    point_count_eval,
    product_inventory,
    purity_extend,
    signed_poly,
    stable_solve,
    suspend,
    tate_twist,
    union,
)
from motocell.errors import (
    DimensionTooSmall,
    NonSplit,
    NotEvenPure,
    PointingMismatch,
    ValidationError,
)
from oracles import gaussian_binomial

P = SignedTatePolynomial.from_list


def inv(*cells, pointing="plus"):
    return CellInventory.of(cells, pointing)


GR24 = inv((0, 0), (2, 1), (4, 2), (4, 2), (6, 3), (8, 4))
SPGR24 = inv((0, 0), (2, 1), (4, 2), (6, 3))


def projective(n):
    return CellInventory.of([(2 * i, i) for i in range(n + 1)])


# -- strategies ---------------------------------------------------------------

bidegrees = st.integers(0, 6).flatmap(lambda w: st.tuples(st.integers(w, w + 6), st.just(w)))
inventories = st.lists(bidegrees, max_size=8).map(lambda cs: CellInventory.of(cs))
even_pure = st.lists(st.integers(0, 6), max_size=8).map(
    lambda ws: CellInventory.of([(2 * w, w) for w in ws]))


# -- type invariants ------------------------------------------------------------

def test_inventory_canonical_order_and_multiplicity():
    i = inv((4, 2), (0, 0), (4, 2), (3, 2))
    assert [tuple(b) for b, _ in i.cells] == [(0, 0), (3, 2), (4, 2)]
    assert i.multiplicity(4, 2) == 2
    assert len(i) == 4


@pytest.mark.parametrize("cell", [(0, 1), (-1, 0), (2, -1)])
def test_inventory_rejects_non_spheres(cell):
    with pytest.raises(ValidationError):
        inv(cell)


def test_records_round_trip():
    assert CellInventory.from_records(GR24.to_records()) == GR24


# -- suspend / twist ---------------------------------------------------------------

def test_suspend_examples():
    assert len(suspend(EMPTY, 3)) == 0
    assert suspend(inv((1, 1)), 1).same_cells(inv((2, 1)))
    assert suspend(inv((0, 0), (4, 2)), 1).same_cells(inv((1, 0), (5, 2)))
    assert suspend(POINT, 2).pointing == "reduced"


def test_twist_examples():
    for n in range(4):
        assert tate_twist(POINT, n).same_cells(inv((2 * n, n)))
    assert tate_twist(GR24, 0) == GR24
    assert tate_twist(SPGR24, 1).same_cells(inv((2, 1), (4, 2), (6, 3), (8, 4)))


@given(inventories, st.integers(0, 4), st.integers(0, 4))
def test_suspend_and_twist_compose(i, a, b):
    assert suspend(suspend(i, a), b).same_cells(suspend(i, a + b))
    assert tate_twist(tate_twist(i, a), b).same_cells(tate_twist(i, a + b))
    assert suspend(tate_twist(i, a), b).same_cells(tate_twist(suspend(i, b), a))


# -- product ------------------------------------------------------------------------

def test_product_examples():
    assert product_inventory(GR24, POINT) == GR24
    gm2 = product_inventory(GM, GM)
    assert gm2.same_cells(inv((0, 0), (1, 1), (1, 1), (2, 2)))
    gm3 = product_inventory(gm2, GM)
    assert dict(gm3.cells) == {(i, i): comb(3, i) for i in range(4)}
    # point counts of G_m^2: (q-1)^2
    for q in (2, 3, 5):
        assert point_count_eval(gm2, 2, q) == (q - 1) ** 2


def test_product_needs_plus():
    with pytest.raises(PointingMismatch):
        product_inventory(suspend(GM, 1), GM)


# -- signed polynomial -------------------------------------------------------------

def test_signed_poly_examples():
    assert signed_poly(POINT) == 1
    assert signed_poly(projective(2)) == P([1, 1, 1])
    assert signed_poly(GM) == P([1, -1])
    assert signed_poly(GR24) == P(gaussian_binomial(4, 2))


@given(inventories, inventories, st.integers(0, 3), st.integers(0, 3))
def test_chi_is_a_homomorphism(a, b, k, c):
    assert signed_poly(union(a, b)) == signed_poly(a) + signed_poly(b)
    assert signed_poly(product_inventory(a, b)) == signed_poly(a) * signed_poly(b)
    assert signed_poly(suspend(a, k)) == signed_poly(a) * (-1) ** k
    assert signed_poly(tate_twist(a, c)) == signed_poly(a).shift(c)


def test_polynomial_arithmetic():
    a = P([1, -1])
    assert a * a == P([1, -2, 1])
    assert a - a == 0
    assert (a * a)(1) == 0
    assert repr(P([1, -2, 1])) == "1 - 2x + x^2"
    assert P([0, 0, 3]).to_list() == [0, 0, 3]


# -- point counts -------------------------------------------------------------------

def test_point_count_examples():
    for q in (2, 3, 4, 5):
        assert point_count_eval(POINT, 0, q) == 1
    for n in range(1, 5):
        punctured = inv((0, 0), (2 * n - 1, n))
        for q in (2, 3, 5):
            assert point_count_eval(punctured, n, q) == q**n - 1
    aq3 = inv((0, 0), (3, 2))
    for q in (2, 3, 5, 7):
        assert point_count_eval(aq3, 3, q) == q**3 - q


def test_point_count_errors():
    with pytest.raises(DimensionTooSmall):
        point_count_eval(projective(3), 2, 5)
    with pytest.raises(PointingMismatch):
        point_count_eval(suspend(POINT, 1), 0, 5)


@given(inventories, inventories, st.sampled_from([2, 3, 5, 7]))
def test_point_count_respects_products(a, b, q):
    da, db = a.max_weight, b.max_weight
    assert (point_count_eval(product_inventory(a, b), da + db, q)
            == point_count_eval(a, da, q) * point_count_eval(b, db, q))


# -- purity ------------------------------------------------------------------------

def test_purity_extend_examples():
    assert purity_extend(POINT, inv(), 1, 0).same_cells(inv((1, 0)))
    sigma_hp1 = purity_extend(GR24, SPGR24, 1, 0)
    assert len(sigma_hp1) == 10
    assert sigma_hp1.same_cells(inv((2, 1), (4, 2), (6, 3), (8, 4),
                                    (1, 0), (3, 1), (5, 2), (5, 2), (7, 3), (9, 4)))
    assert signed_poly(sigma_hp1) == P([-1, 0, -1])
    for n in range(1, 6):
        affine = purity_extend(projective(n), projective(n - 1), 1, 0)
        assert signed_poly(affine) == -1


@given(even_pure, even_pure, st.integers(1, 3), st.integers(0, 3))
def test_purity_chi_consistency(ambient, closed, c, k):
    out = purity_extend(ambient, closed, c, k)
    # both inputs already carry k suspensions, so the sign is independent of k
    expected = signed_poly(closed).shift(c) - signed_poly(ambient)
    assert signed_poly(out) == expected
    assert out.pointing == "reduced"


def test_leveled_purity_levels():
    out, level = leveled_purity(GM, 0, POINT, 0, 1)
    assert level == 1
    # G_m minus a point: Sigma G_m,+ together with the Thom cell of the point
    assert out.same_cells(inv((1, 0), (2, 1), (2, 1)))
    _, level = leveled_purity(GM, 2, POINT, 0, 1)
    assert level == 3


def test_purity_rejects_bad_codim():
    with pytest.raises(ValidationError):
        purity_extend(POINT, POINT, 0, 0)


# -- stable_solve -------------------------------------------------------------------

def test_stable_solve_examples():
    thom = tate_twist(SPGR24, 1)
    assert stable_solve(union(thom, POINT), thom).same_cells(POINT)
    assert stable_solve(GR24, thom).same_cells(inv((0, 0), (4, 2)))
    for n in range(1, 6):
        assert stable_solve(projective(n), tate_twist(projective(n - 1), 1)).same_cells(POINT)


def test_stable_solve_errors():
    with pytest.raises(NonSplit):
        stable_solve(POINT, tate_twist(projective(1), 1))
    with pytest.raises(NotEvenPure):
        stable_solve(GM, POINT)


@given(even_pure, even_pure, st.integers(1, 3))
def test_stable_solve_inverts_purity(ambient, closed, c):
    diff = signed_poly(ambient) - signed_poly(closed).shift(c)
    if any(v < 0 for v in diff.coefficients.values()):
        with pytest.raises(NonSplit):
            stable_solve(ambient, tate_twist(closed, c))
        return
    assert stable_solve(ambient, tate_twist(closed, c)) == even_pure_lift(diff)
