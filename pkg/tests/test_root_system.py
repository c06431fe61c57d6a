import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from motocell import _kernels
from motocell.cells import CellInventory, signed_poly
from motocell.errors import InvalidType, ResourceLimit, ValidationError
from motocell.root_system import (
    CartanDatum,
    build_cartan,
    flag_cell_inventory,
    flag_variety,
    gram_matrix,
    inversion_count,
    is_minimal_representative,
    levi_order,
    omit,
    order_from_heights,
    parabolic_quotient,
    weyl_group_elements,
    weyl_order,
    weyl_order_by_degrees,
)
from oracles import count_subspaces, gaussian_binomial, weyl_closure_order

SMALL = [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3), ("C", 2), ("C", 3),
         ("D", 4), ("G", 2), ("B", 4), ("C", 4), ("F", 4)]


# -- Cartan data -------------------------------------------------------------------

def test_bourbaki_matrices():
    assert build_cartan("A", 2).cartan_matrix == ((2, -1), (-1, 2))
    # A[i][j] = <alpha_i^vee, alpha_j>; node 1 of B2 is long, of C2 short
    assert build_cartan("B", 2).cartan_matrix == ((2, -1), (-2, 2))
    assert build_cartan("C", 2).cartan_matrix == ((2, -2), (-1, 2))
    assert build_cartan("G", 2).cartan_matrix == ((2, -3), (-1, 2))
    f4 = build_cartan("F", 4).cartan_matrix
    assert f4[1][2] == -1 and f4[2][1] == -2
    e6 = np.array(build_cartan("E", 6).cartan_matrix)
    # node 2 attaches to node 4
    assert e6[1, 3] == -1 and e6[1, 2] == 0


@pytest.mark.parametrize("family,rank", [("F", 5), ("E", 9), ("E", 5), ("G", 3),
                                         ("A", 0), ("D", 1), ("X", 2)])
def test_invalid_types(family, rank):
    with pytest.raises(InvalidType):
        build_cartan(family, rank)


def test_non_finite_type_rejected():
    with pytest.raises(InvalidType):
        CartanDatum("A", 2, ((2, -2), (-2, 2)))  # affine A1
    with pytest.raises(InvalidType):
        CartanDatum("A", 2, ((2, -1), (0, 2)))  # not symmetrizable


@pytest.mark.parametrize("family,rank", SMALL + [("E", 6), ("E", 7), ("E", 8)])
def test_gram_is_symmetric_positive(family, rank):
    g = np.array(gram_matrix(family, rank), dtype=float)
    assert np.array_equal(g, g.T)
    assert np.all(np.linalg.eigvalsh(g) > 0)


@pytest.mark.parametrize("family,rank", SMALL + [("E", 6)])
def test_root_counts(family, rank):
    d = build_cartan(family, rank)
    # |Phi+| = sum of (degree - 1) = number of reflections
    n_pos = len(d.positive_roots)
    assert 2 * n_pos == len(d.roots)
    assert max(w.length for w in weyl_group_elements(d)) == n_pos


# -- orders ------------------------------------------------------------------------

@pytest.mark.parametrize("family,rank,order", [
    ("A", 1, 2), ("A", 2, 6), ("B", 2, 8), ("C", 2, 8), ("G", 2, 12),
    ("A", 3, 24), ("B", 3, 48), ("D", 4, 192), ("F", 4, 1152),
])
def test_weyl_orders(family, rank, order):
    d = build_cartan(family, rank)
    assert weyl_order(d) == order
    assert weyl_order_by_degrees(d) == order
    assert weyl_closure_order(d.cartan_matrix) == order


def test_e6_order():
    d = build_cartan("E", 6)
    assert weyl_order(d) == 51840 == weyl_order_by_degrees(d)


@pytest.mark.parametrize("family,rank", SMALL + [("E", 6), ("E", 7), ("E", 8), ("A", 9),
                                         ("D", 7), ("B", 8)])
def test_order_from_heights(family, rank):
    d = build_cartan(family, rank)
    assert order_from_heights(d.cartan_matrix) == weyl_order_by_degrees(d)


def test_order_from_heights_reducible():
    # A1 x A2 x G2 inside a block-diagonal matrix
    m = [[2, 0, 0, 0, 0], [0, 2, -1, 0, 0], [0, -1, 2, 0, 0], [0, 0, 0, 2, -3], [0, 0, 0, -1, 2]]
    assert order_from_heights(m) == 2 * 6 * 12 == weyl_closure_order(m)


def test_orbit_budget_in_loop():
    d = build_cartan("A", 4)
    with pytest.raises(ResourceLimit):
        list(_kernels.orbit_levels(d.matrix, [1, 1, 1, 1], track=False, budget=50))


def test_budget_is_enforced():
    with pytest.raises(ResourceLimit):
        weyl_order(build_cartan("E", 8))
    with pytest.raises(ResourceLimit):
        weyl_order(build_cartan("A", 4), budget=50)
    with pytest.raises(ResourceLimit):
        weyl_group_elements(build_cartan("A", 4), budget=50)


@pytest.mark.parametrize("family,rank", SMALL)
def test_levi_times_quotient_is_group(family, rank):
    d = build_cartan(family, rank)
    order = weyl_order(d)
    for node in d.node_labels:
        p = omit(d, [node])
        assert levi_order(d, p) * len(parabolic_quotient(d, p)) == order


# -- parabolic quotients vs brute force ---------------------------------------------

@pytest.mark.parametrize("family,rank", SMALL[:10])
def test_quotient_matches_brute_force(family, rank):
    d = build_cartan(family, rank)
    group = weyl_group_elements(d)
    for elem in group:
        assert elem.length == inversion_count(d, elem)
    for node in d.node_labels:
        p = omit(d, [node])
        brute = sorted(w.sort_key() for w in group if is_minimal_representative(w, p))
        fast = [w.sort_key() for w in parabolic_quotient(d, p).representatives]
        assert brute == fast


def test_full_flag_has_all_elements():
    d = build_cartan("B", 3)
    q = parabolic_quotient(d, frozenset())
    assert len(q) == 48
    assert q.dimension == len(d.positive_roots)


@pytest.mark.parametrize("family,rank", SMALL)
def test_poincare_polynomials_are_palindromic(family, rank):
    d = build_cartan(family, rank)
    for node in d.node_labels:
        coeffs = parabolic_quotient(d, omit(d, [node])).length_polynomial().to_list()
        assert coeffs == coeffs[::-1]


def test_backends_agree():
    if not _kernels.HAVE_NUMBA:
        pytest.skip("numba not installed")
    for family, rank in SMALL + [("E", 6)]:
        d = build_cartan(family, rank)
        p = omit(d, [1])
        a = parabolic_quotient(d, p, backend="numba")
        b = parabolic_quotient(d, p, backend="numpy")
        assert a == b
        assert [w.length for w in a.representatives] == [w.length for w in b.representatives]


@given(st.lists(st.lists(st.integers(-20, 20), min_size=3, max_size=3), min_size=1, max_size=40))
def test_unique_rows_matches_numpy(rows):
    a = np.array(rows, dtype=np.int64)
    got_rows, got_idx = _kernels.unique_rows(a)
    want_rows, want_idx = np.unique(a, axis=0, return_index=True)
    assert np.array_equal(got_rows, want_rows)
    assert np.array_equal(a[got_idx], a[want_idx])


def test_unique_rows_wide_fallback():
    a = np.array([[2**40, -2**40, 1], [0, 0, 0], [2**40, -2**40, 1]], dtype=np.int64)
    rows, _ = _kernels.unique_rows(a)
    assert rows.tolist() == [[0, 0, 0], [2**40, -2**40, 1]]


def test_unknown_nodes():
    with pytest.raises(ValidationError):
        omit(build_cartan("A", 3), [4])


# -- cell inventories ----------------------------------------------------------------

@pytest.mark.parametrize("n", range(1, 8))
def test_projective_space(n):
    inv = flag_cell_inventory(flag_variety("A", n, omit(build_cartan("A", n), [1])))
    assert inv == CellInventory.of([(2 * i, i) for i in range(n + 1)])


@given(st.integers(2, 7).flatmap(lambda m: st.tuples(st.just(m), st.integers(1, m - 1))))
def test_grassmannians_are_gaussian_binomials(mk):
    m, k = mk
    d = build_cartan("A", m - 1)
    inv = flag_cell_inventory(flag_variety("A", m - 1, omit(d, [k])))
    assert signed_poly(inv).to_list() == gaussian_binomial(m, k)


@pytest.mark.parametrize("m,k,p", [(3, 1, 2), (4, 2, 2), (4, 2, 3), (5, 2, 2)])
def test_grassmannian_point_counts_brute_force(m, k, p):
    d = build_cartan("A", m - 1)
    poly = signed_poly(flag_cell_inventory(flag_variety("A", m - 1, omit(d, [k]))))
    assert poly(p) == count_subspaces(m, k, p)


def test_exceptional_flags():
    e6 = flag_variety("E", 6, omit(build_cartan("E", 6), [1]))
    f4 = flag_variety("F", 4, omit(build_cartan("F", 4), [4]))
    assert (len(e6), e6.dimension) == (27, 16)
    assert (len(f4), f4.dimension) == (24, 15)


def test_env_flag_selects_numpy():
    import os
    import subprocess
    import sys

    env = dict(os.environ, MOTOCELL_DISABLE_NUMBA="1")
    code = "from motocell import _kernels; print(_kernels.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "numpy"
