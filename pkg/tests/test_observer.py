import pytest

from mspace.algebra import convolve, delta, osupp_fn
from mspace.groupoid import pair_groupoid, parse_groupoid_spec, quantale_of_groupoid
from mspace.observer import (
    ObserverError,
    ObserverMap,
    PowerspaceCarrier,
    ArrowSetCarrier,
    base_observer,
    build_canonical_observer,
    coefficient_spans,
    find_persistency_witness,
    ib_conditions,
    identity_observer,
    local_observer_of_iqf,
    negative_probe,
    population_from,
    pseudogroup_correspondence,
    standard_population,
    tuples,
    verify_observer,
)
from mspace.powerspace import iota_Cc, max_product, span
from mspace.quantale import chain3_bad, pseudogroup_Ib, relations_quantale

CORE = ("axioms", "etale", "istable", "increasing", "full", "multiplicative")


def statuses(rep):
    return {c.law: c.status for c in rep.checks}


@pytest.fixture(scope="module")
def z2():
    return parse_groupoid_spec("group(Z2)")


@pytest.mark.parametrize("spec", ["pair(1)", "pair(2)", "action(Z2)", "group(Z2)"])
@pytest.mark.parametrize("suite", ["axioms", "etale", "increasing_full_multiplicative"])
def test_canonical_observer_suites(spec, suite):
    obs = build_canonical_observer(parse_groupoid_spec(spec))
    rep = verify_observer(obs, suite, samples=64)
    assert rep.ok, rep.render_text()
    assert all(c.status == "pass" for c in rep.checks)


def test_one_arrow_groupoid_observer_is_an_isomorphism():
    g = pair_groupoid(1)
    obs = build_canonical_observer(g)
    pop = standard_population(obs, samples=16)
    for u in (0, 1):
        assert obs.r(obs.iota(u)) == u
    for m in pop.domain:
        assert obs.iota(obs.r(m)) == m


@pytest.mark.parametrize("suite", CORE + ("persistency",))
def test_identity_observer_passes(suite):
    obs = identity_observer(relations_quantale(2))
    rep = verify_observer(obs, suite)
    assert rep.ok and all(c.status == "pass" for c in rep.checks), rep.render_text()


def test_local_observer_of_relations():
    q = relations_quantale(2)
    obs = local_observer_of_iqf(q)
    rep = verify_observer(obs, "axioms")
    assert rep.ok
    assert rep.population["domain"] == 16
    assert obs.r(q.unit) == q.unit
    r_12_11 = 0b0011  # {(1,1), (1,2)}
    assert q.name(obs.r(r_12_11)) == "{(1,1)}"


def test_local_observer_needs_inverse_quantal_frame():
    with pytest.raises(ObserverError, match="stably Gelfand"):
        local_observer_of_iqf(chain3_bad())


def test_base_observer_is_composite_with_local_observer():
    g = pair_groupoid(2)
    obs = build_canonical_observer(g)
    base = base_observer(obs)
    local = local_observer_of_iqf(quantale_of_groupoid(g))
    pop = standard_population(obs, samples=64)
    for m in pop.domain:
        assert base.r(m) == local.r(obs.r(m))
    rep = verify_observer(obs, "base", samples=64)
    assert rep.ok and all(c.law.startswith("base observer: ") for c in rep.checks)


@pytest.mark.parametrize("spec", ["pair(2)", "group(Z2)", "action(Z2)"])
def test_open_support_of_products(spec):
    g = parse_groupoid_spec(spec)
    obs = build_canonical_observer(g)
    pop = standard_population(obs, samples=32)
    for v in pop.domain[::3]:
        for w in pop.domain[::5]:
            assert obs.r(max_product(v, w)) & ~g.product(obs.r(v), obs.r(w)) == 0


def test_z2_persistency_witness_by_hand(z2):
    # (d_e + d_g) d_e (d_e - d_g) = d_e + d_g - d_g - d_e = 0
    e, g = delta(z2, "e"), delta(z2, "g")
    assert convolve(convolve(e + g, e), e - g).is_zero()
    obs = build_canonical_observer(z2)
    res = find_persistency_witness(obs, standard_population(obs))
    assert not res.persistent and res.exhaustive_phase
    w = res.witness
    assert w["search"] == "coefficient spans"
    assert w["m"]["value"] == span(z2, [(1, 1)]).to_json()
    assert w["w"]["value"] == ["e"]
    assert w["n"]["value"] == span(z2, [(1, -1)]).to_json()
    assert w["r(m iota(w) n)"] == [] and w["r(m) w r(n)"] == ["e", "g"]


def test_coefficient_search_order(z2):
    spans = coefficient_spans(z2)
    # up to sign: (0,1), (1,0), (1,1), (1,-1)
    assert [s.to_json() for s in spans] == [span(z2, [v]).to_json() for v in [(0, 1), (1, 0), (1, 1), (1, -1)]]


def test_z2_persistency_suite(z2):
    rep = verify_observer(build_canonical_observer(z2), "persistency")
    st = statuses(rep)
    assert st["persistency"] == "fail"
    assert st["theorem: principal implies persistent"] == "pass"
    assert st["theorem: persistent implies principal"] == "pass"
    assert rep.summary["persistency"] == "witness found"


def test_pair_persistency_passes():
    rep = verify_observer(build_canonical_observer(pair_groupoid(2)), "persistency", samples=64)
    assert rep.ok and rep.summary["persistency"] == "persistent over population"
    assert rep.status_of("persistent iteration (depth 2)") == "pass"


def test_z2_istability_conditions_fail_together(z2):
    rep = verify_observer(build_canonical_observer(z2), "istable")
    st = statuses(rep)
    conds = [st["I-stable (1): r(s) in I(Omega)"], st["I-stable (2): r(s) r(t) <= r(st)"], st["I-stable (3): r(s) w r(t) <= r(s iota(w) t)"]]
    assert conds == ["fail"] * 3
    assert st["I-stability equivalence"] == "pass"
    assert rep.check("I-stable (1): r(s) in I(Omega)").witness["m"]["value"] == span(z2, [(1, "-i")]).to_json()


@pytest.mark.parametrize("spec", ["pair(1)", "pair(2)", "action(Z2)", "pair(1)+pair(1)"])
def test_principal_istability_all_pass(spec):
    rep = verify_observer(build_canonical_observer(parse_groupoid_spec(spec)), "istable", samples=64)
    assert rep.ok and all(c.status == "pass" for c in rep.checks)


def test_arrow_set_pseudogroup_of_z2(z2):
    q = quantale_of_groupoid(z2)
    assert [q.name(s) for s in pseudogroup_Ib(q, q.unit)] == ["{}", "{e}", "{g}"]


def test_pseudogroup_pair2():
    g = pair_groupoid(2)
    obs = build_canonical_observer(g)
    rep = pseudogroup_correspondence(g, standard_population(obs, samples=64), obs)
    assert rep.ok
    assert rep.summary["pseudogroup"] == "7 ↔ 7 bijection verified"


def test_negative_probe_is_excluded():
    g = pair_groupoid(2)
    probe = negative_probe(g)
    assert probe == span(g, [(0, 1, 1, 0)])
    b = iota_Cc(g, g.unit_mask)
    conds = ib_conditions(PowerspaceCarrier(g), probe, b)
    assert not conds["sb <= s"]
    assert max_product(probe, b).dim == 2
    assert conds["ss* <= b"] and conds["s*s <= b"]


def test_pseudogroup_needs_principal(z2):
    with pytest.raises(ObserverError):
        pseudogroup_correspondence(z2)
    with pytest.raises(ObserverError):
        verify_observer(build_canonical_observer(z2), "pseudogroup")
    rep = verify_observer(build_canonical_observer(z2), "all", samples=32)
    assert rep.status_of("pseudogroup correspondence") == "inconclusive"


def test_broken_retraction_is_caught():
    g = pair_groupoid(2)
    good = build_canonical_observer(g)
    bad = ObserverMap("broken", good.domain, ArrowSetCarrier(g), good.iota, lambda v: g.full if v.gens else 0, g)
    rep = verify_observer(bad, "axioms", samples=16)
    assert rep.status_of("retraction of embedding: r(iota(w)) = w") == "fail"
    w = rep.check("retraction of embedding: r(iota(w)) = w").witness
    assert w == {"w": {"index": 1, "value": ["(1,1)"]}}


def test_empty_population_and_unknown_suite():
    obs = build_canonical_observer(pair_groupoid(1))
    with pytest.raises(ObserverError):
        verify_observer(obs, "axioms", pop=population_from(obs, [], [0, 1]))
    with pytest.raises(ObserverError):
        verify_observer(obs, "nonsense")


def test_tuples_exhaustive_then_sampled():
    it, ex = tuples([3, 4], "law", 0, 10, 100)
    assert ex and list(it)[:2] == [(0, 0), (0, 1)]
    it, ex = tuples([30, 40], "law", 0, 10, 100)
    got = list(it)
    assert not ex and len(got) == 30 and [t[0] for t in got] == list(range(30))
    again, _ = tuples([30, 40], "law", 0, 10, 100)
    assert list(again) == got


def test_reports_are_deterministic():
    obs = build_canonical_observer(parse_groupoid_spec("action(Z2)"))
    a = verify_observer(obs, "all", seed=3, samples=32).dumps()
    b = verify_observer(build_canonical_observer(parse_groupoid_spec("action(Z2)")), "all", seed=3, samples=32).dumps()
    assert a == b
    c = verify_observer(obs, "all", seed=4, samples=32).dumps()
    assert '"seed": 4' in c


def test_open_support_matches_delta_sum():
    g = pair_groupoid(2)
    f = delta(g, "(1,2)") + delta(g, "(2,2)", "i")
    assert build_canonical_observer(g).r(span(g, [f.coeffs])) == osupp_fn(f)
