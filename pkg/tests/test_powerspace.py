import random

import pytest
from hypothesis import given, settings, strategies as st

from mspace.algebra import GroupoidFunction, matrix_rep
from mspace.groupoid import GroupoidError, pair_groupoid, parse_groupoid_spec
from mspace.powerspace import (
    PowerspaceElement,
    c2,
    from_matrices,
    iota_Cc,
    m2,
    max_base,
    max_involute,
    max_join,
    max_leq,
    max_meet,
    max_one,
    max_product,
    max_top,
    max_zero,
    osupp_subspace,
    pushforward_subspace,
    random_element,
    span,
    spin_library,
    spin_library_c2,
    stably_gelfand_element,
    transpose_map,
    zero_pattern_retraction,
)
from mspace.scalars import gr

SPECS = ["pair(2)", "group(Z2)", "group(Z3)", "action(Z2)", "pair(2)+pair(1)"]


def elements(g):
    return st.randoms(use_true_random=False).map(lambda r: random_element(g, r))


def E(x, y, n=2):
    return [[1 if (i, j) == (x - 1, y - 1) else 0 for j in range(n)] for i in range(n)]


@pytest.fixture(scope="module")
def lib():
    return spin_library()


def test_spin_relations(lib):
    assert max_join(lib["z_up"], lib["z_down"]) == lib["z"]
    assert lib["z"] == from_matrices(m2(), [E(1, 1), E(2, 2)])
    assert max_meet(lib["z_down"], lib["z_up"]) == max_zero(m2())
    assert max_product(lib["z"], lib["z_up"]) == lib["z_up"]
    assert lib["x"] != lib["z"]
    assert max_join(lib["x_up"], lib["x_down"]) == lib["x"]


def test_hilbert_space_picture_conflates_x_and_z():
    c = spin_library_c2()
    assert c["x"] == c["z"] == max_top(c2())


def test_product_examples(lib):
    g = m2()
    assert max_product(max_zero(g), lib["x_up"]) == max_zero(g)
    # [[1,1],[1,1]] E11 = [[1,0],[1,0]]
    assert max_product(lib["x_up"], lib["z_up"]) == from_matrices(g, [[[1, 0], [1, 0]]])


def test_involution_examples(lib):
    g = m2()
    assert max_involute(from_matrices(g, [E(1, 2)])) == from_matrices(g, [E(2, 1)])
    assert max_involute(lib["z"]) == lib["z"]
    p = from_matrices(g, [[[0, gr("1+i")], [0, 0]]])
    assert max_involute(p) == from_matrices(g, [E(2, 1)])


def test_osupp_and_iota_examples():
    z2 = parse_groupoid_spec("group(Z2)")
    g = m2()
    assert osupp_subspace(max_zero(z2)) == 0
    assert osupp_subspace(span(z2, [(1, 1)])) == 0b11
    u = g.set_from_names(["(1,1)", "(1,2)"])
    assert osupp_subspace(iota_Cc(g, u)) == u
    assert iota_Cc(g, 0) == max_zero(g)
    assert iota_Cc(g, g.set_from_names(["(1,2)"])) == from_matrices(g, [E(1, 2)])
    a, b = g.set_from_names(["(1,2)"]), g.set_from_names(["(2,1)"])
    assert iota_Cc(g, g.product(a, b)) == max_product(iota_Cc(g, a), iota_Cc(g, b)) == from_matrices(g, [E(1, 1)])
    assert max_base(g) == from_matrices(g, [E(1, 1), E(2, 2)])
    assert max_one(g) == from_matrices(g, [[[1, 0], [0, 1]]])
    assert max_one(g) != max_base(g)


def test_stably_gelfand_examples():
    g = m2()
    for mats in ([E(1, 1)], [E(1, 2)], [[[1, 1], [0, 0]]]):
        p = from_matrices(g, mats)
        chk = stably_gelfand_element(p)
        # A A* A is a nonzero multiple of A for each of these rank-one matrices
        assert chk.triple == p
        assert chk.triple_below and chk.above_triple and not chk.violated


def test_pushforward_examples(lib):
    g = m2()
    ident = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    p = lib["x_up"]
    assert pushforward_subspace(ident, p) == p
    assert pushforward_subspace([[0] * 4 for _ in range(4)], p) == max_zero(g)
    assert pushforward_subspace(transpose_map(2), lib["z_up"]) == lib["z_up"]
    assert pushforward_subspace(transpose_map(2), from_matrices(g, [E(1, 2)])) == from_matrices(g, [E(2, 1)])
    with pytest.raises(GroupoidError):
        pushforward_subspace([[1, 0, 0, 0]], p)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SPECS), st.randoms(use_true_random=False))
def test_quantale_laws_on_sampled_elements(spec, rnd):
    g = parse_groupoid_spec(spec)
    p, q, r = (random_element(g, rnd) for _ in range(3))
    assert max_product(max_product(p, q), r) == max_product(p, max_product(q, r))
    assert max_product(p, max_join(q, r)) == max_join(max_product(p, q), max_product(p, r))
    assert max_product(max_join(q, r), p) == max_join(max_product(q, p), max_product(r, p))
    assert max_involute(max_product(p, q)) == max_product(max_involute(q), max_involute(p))
    assert max_involute(max_involute(p)) == p
    assert max_involute(max_join(p, q)) == max_join(max_involute(p), max_involute(q))
    assert max_product(p, max_zero(g)) == max_zero(g) == max_product(max_zero(g), p)
    assert max_product(max_one(g), p) == p == max_product(p, max_one(g))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SPECS), st.randoms(use_true_random=False))
def test_order_is_inclusion(spec, rnd):
    g = parse_groupoid_spec(spec)
    p, q = random_element(g, rnd), random_element(g, rnd)
    assert max_leq(p, q) == (max_join(p, q) == q) == (max_meet(p, q) == p)
    assert max_leq(max_meet(p, q), p) and max_leq(p, max_join(p, q))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SPECS), st.randoms(use_true_random=False))
def test_stably_gelfand_on_sampled_elements(spec, rnd):
    g = parse_groupoid_spec(spec)
    p = random_element(g, rnd)
    assert not stably_gelfand_element(p).violated


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_commutative_group_algebra_gives_commutative_products(rnd):
    g = parse_groupoid_spec("group(Z3)")
    p, q = random_element(g, rnd), random_element(g, rnd)
    assert max_product(p, q) == max_product(q, p)


def test_matrix_algebra_products_do_not_commute():
    g = m2()
    a, b = from_matrices(g, [E(1, 1)]), from_matrices(g, [E(1, 2)])
    assert max_product(a, b) == b
    assert max_product(b, a) == max_zero(g)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["pair(2)", "pair(3)"]), st.randoms(use_true_random=False))
def test_pushforward_is_join_over_basis(spec, rnd):
    g = parse_groupoid_spec(spec)
    n = g.n_arrows
    h = [[rnd.choice([0, 1, -1, "i"]) for _ in range(n)] for _ in range(n)]
    p = random_element(g, rnd)
    joined = max_zero(g)
    for row in p.subspace.basis:
        joined = max_join(joined, pushforward_subspace(h, span(g, [row])))
    assert pushforward_subspace(h, p) == joined


@pytest.mark.parametrize("n", [2, 3])
def test_zero_pattern_retraction_agrees_with_open_support(n):
    g = pair_groupoid(n)
    rng = random.Random(f"zero-pattern:{n}")
    for _ in range(200):
        v = random_element(g, rng)
        assert zero_pattern_retraction(v) == iota_Cc(g, osupp_subspace(v))


def test_elements_check_their_algebra():
    with pytest.raises(GroupoidError):
        span(m2(), [(1, 0)])
    with pytest.raises(GroupoidError):
        max_join(max_zero(m2()), max_zero(c2()))


def test_canonical_equality_ignores_presentation():
    g = m2()
    a = PowerspaceElement(g, [(1, 1, 0, 0), (1, -1, 0, 0), (2, 0, 0, 0)])
    b = PowerspaceElement(g, [(0, 1, 0, 0), (1, 0, 0, 0)])
    assert a == b and hash(a) == hash(b) and a.dim == 2
    assert matrix_rep(GroupoidFunction(g, a.subspace.basis[0])) == [[1, 0], [0, 0]]
