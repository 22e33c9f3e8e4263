import json
from itertools import product
from math import comb, factorial

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from mspace.quantale import (
    FiniteInvolutiveQuantale,
    FiniteSupLattice,
    NotAProjection,
    StructureError,
    boolean_algebra,
    chain,
    chain3_bad,
    direct_sum,
    frame_law_violation,
    gelfand_class,
    gelfand_failures,
    is_inverse_quantal_frame,
    load_quantale,
    locale_quantale,
    one_element,
    order_isomorphism,
    partial_units,
    pseudogroup_Ib,
    relations_quantale,
    sided_elements,
    sum_distributivity_violation,
    sum_injections,
    two,
    verify_quantale,
)
from mspace.space import random_lattice_order

PAIRS2 = [(x, y) for x in (1, 2) for y in (1, 2)]


def rel(mask: int) -> frozenset:
    return frozenset(p for k, p in enumerate(PAIRS2) if mask >> k & 1)


def compose(r, s):
    """Relation product in the groupoid convention: (x,y)(y,z) = (x,z)."""
    return frozenset((x, z) for (x, y) in r for (y2, z) in s if y == y2)


@pytest.fixture(scope="module")
def rel2():
    return relations_quantale(2)


def test_relations_tables_match_set_oracle(rel2):
    for a in range(16):
        assert rel(int(rel2.inv[a])) == frozenset((y, x) for x, y in rel(a))
        for b in range(16):
            assert rel(int(rel2.mult[a, b])) == compose(rel(a), rel(b))
    assert rel(rel2.unit) == {(1, 1), (2, 2)}


def test_relations2_verifies_and_is_strongly_gelfand(rel2):
    assert verify_quantale(rel2).ok
    g = gelfand_class(rel2)
    assert g.classification == "strongly Gelfand"
    assert g.is_gelfand and g.is_stably_gelfand and g.is_strongly_gelfand
    # direct oracle: R <= R R* R for every relation
    for a in range(16):
        r = rel(a)
        assert r <= compose(compose(r, frozenset((y, x) for x, y in r)), r)


def test_relations2_partial_units(rel2):
    units = partial_units(rel2)
    # partial bijections on two points: sum over k of C(2,k)^2 k!
    assert len(units) == sum(comb(2, k) ** 2 * factorial(k) for k in range(3)) == 7
    for s in units:
        r = rel(s)
        assert len({x for x, _ in r}) == len(r) == len({y for _, y in r})


def test_relations2_is_inverse_quantal_frame(rel2):
    ok, rep = is_inverse_quantal_frame(rel2)
    assert ok, rep.render_text()


def test_relations2_right_sided_elements(rel2):
    top = frozenset(PAIRS2)
    oracle = [a for a in range(16) if compose(rel(a), top) <= rel(a)]
    assert len(oracle) == 4
    se = sided_elements(rel2)
    assert list(se.right) == oracle
    assert set(se.two) == {0, 15}
    assert se.two_sided_is_locale


def test_relations2_Ib_special_cases(rel2):
    assert pseudogroup_Ib(rel2, rel2.bottom) == (0,)
    ts = tuple(a for a in range(16) if rel2.le(rel2.mul(a, rel2.top), a) and rel2.le(rel2.mul(rel2.top, a), a))
    assert pseudogroup_Ib(rel2, rel2.top) == ts
    with pytest.raises(NotAProjection):
        pseudogroup_Ib(rel2, 0b0010)


def test_Ib_is_monoid_with_unit_b(rel2):
    for b in (rel2.unit, rel2.top, 0b0001):
        ib = set(pseudogroup_Ib(rel2, b))
        for s in ib:
            assert rel2.mul(s, b) == s == rel2.mul(b, s)
            for t in ib:
                assert rel2.mul(s, t) in ib


def test_chain3_bad_laws_by_triple_enumeration():
    q = chain3_bad()
    assert verify_quantale(q).ok
    # independent oracle: 1*1 = a and all else 0
    def m(x, y):
        return 1 if (x, y) == (2, 2) else 0

    assert sum(m(m(a, b), c) == m(a, m(b, c)) for a, b, c in product(range(3), repeat=3)) == 27


def test_chain3_bad_gelfand_witness():
    q = chain3_bad()
    g = gelfand_class(q)
    assert not g.is_stably_gelfand
    assert g.witnesses["stably Gelfand"] == 1
    assert q.element(1) == {"index": 1, "label": "a"}
    assert list(gelfand_failures(q)["stably Gelfand"]) == [1, 2]
    assert g.classification == "not Gelfand"
    ok, rep = is_inverse_quantal_frame(q)
    assert not ok
    assert rep.status_of("stably Gelfand") == "fail"
    assert rep.check("stably Gelfand").witness == {"a": {"index": 1, "label": "a"}}


@pytest.mark.parametrize("q", [one_element(), two(), chain(4), boolean_algebra(3)])
def test_locales_are_strongly_gelfand_and_sided(q):
    assert verify_quantale(q).ok
    assert gelfand_class(q).is_strongly_gelfand
    se = sided_elements(q)
    assert se.right == se.left == se.two == tuple(range(q.n))


def test_one_element_and_two_chain():
    q = one_element()
    assert sided_elements(q).right == (0,)
    assert is_inverse_quantal_frame(two())[0]


def test_direct_sums():
    b2 = direct_sum(two(), two())
    assert order_isomorphism(b2.lattice, boolean_algebra(2).lattice) is not None
    assert order_isomorphism(direct_sum(b2, two()).lattice, boolean_algebra(3).lattice) is not None
    c = chain(3)
    assert order_isomorphism(direct_sum(c, one_element()).lattice, c.lattice) is not None
    assert order_isomorphism(chain(4).lattice, b2.lattice) is None
    assert verify_quantale(b2).ok


def test_biproduct_equations():
    l, r = chain(3), two()
    i1, i2, p1, p2 = sum_injections(l, r)
    assert (p1[i1] == np.arange(l.n)).all()
    assert (p1[i2] == l.bottom).all()
    assert (p2[i2] == np.arange(r.n)).all()
    assert (p2[i1] == r.bottom).all()
    assert sum_distributivity_violation(l, r) is None


def test_json_round_trip(tmp_path, rel2):
    p = tmp_path / "q.json"
    p.write_text(json.dumps(rel2.to_json()))
    q = load_quantale(str(p))
    assert (q.mult == rel2.mult).all() and q.unit == rel2.unit and q.labels == rel2.labels


def test_bad_tables_are_rejected():
    with pytest.raises(StructureError):
        FiniteSupLattice([[1, 0], [0, 1]])  # antichain: no top
    with pytest.raises(StructureError):
        FiniteInvolutiveQuantale(two().lattice, [[0, 0]], [0, 1])
    with pytest.raises(StructureError):
        FiniteInvolutiveQuantale.from_json({"n": 2})


def test_corrupted_relations_report_least_witness(rel2):
    mult = rel2.mult.copy()
    mult[15, 15] = 0
    bad = FiniteInvolutiveQuantale(rel2.lattice, mult, rel2.inv, rel2.unit, rel2.labels)
    rep = verify_quantale(bad)
    assert rep.status_of("associativity") == "fail"
    assert rep.status_of("left join distributivity") == "fail"


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_random_locales(rnd):
    lat = FiniteSupLattice(random_lattice_order(rnd))
    q = locale_quantale(lat)
    # meet multiplication distributes over joins exactly when the lattice is distributive
    assert verify_quantale(q).ok == (frame_law_violation(lat) is None)
    assume(frame_law_violation(lat) is None)
    g = gelfand_class(q)
    assert g.is_strongly_gelfand and g.is_stably_gelfand and g.is_gelfand


@settings(max_examples=25, deadline=None)
@given(st.randoms(use_true_random=False))
def test_gelfand_hierarchy_is_monotone(rnd):
    # sums of random locales with a strongly Gelfand or a non-Gelfand quantale
    lat = FiniteSupLattice(random_lattice_order(rnd, max_size=4))
    assume(frame_law_violation(lat) is None)
    q = direct_sum(locale_quantale(lat), relations_quantale(2) if rnd.random() < 0.5 else chain3_bad())
    assert verify_quantale(q).ok
    g = gelfand_class(q)
    if g.is_strongly_gelfand:
        assert g.is_stably_gelfand
    if g.is_stably_gelfand:
        idx = np.arange(q.n)
        right = q.leq[q.mult[idx, q.top], idx]
        t = q.mult[q.mult[idx, q.inv], idx]
        assert (~right | q.leq[idx, t]).all()
