import random

import pytest
from hypothesis import given, settings, strategies as st

from mspace.algebra import (
    GroupoidFunction,
    conj_transpose,
    convolve,
    delta,
    from_matrix,
    matrix_rep,
    osupp_fn,
    random_function,
    star,
    zero_function,
)
from mspace.groupoid import GroupoidError, local_bisections, pair_groupoid, parse_groupoid_spec
from mspace.scalars import ONE, ZERO, I, gr
from mspace.space import bits

SPECS = ["pair(1)", "pair(2)", "pair(3)", "group(Z2)", "group(Z3)", "group(S3)", "action(Z2)", "pair(2)+pair(1)"]


def plain_matmul(a, b):
    n = len(a)
    return [[sum((a[i][t] * b[t][j] for t in range(n)), ZERO) for j in range(n)] for i in range(n)]


def functions(g):
    return st.randoms(use_true_random=False).map(lambda r: random_function(g, r))


def test_delta_examples():
    g = pair_groupoid(3)
    assert convolve(delta(g, "(1,2)"), delta(g, "(2,3)")) == delta(g, "(1,3)")
    assert convolve(delta(g, "(1,2)"), delta(g, "(1,2)")).is_zero()


def test_orthogonal_idempotents_in_z2():
    g = parse_groupoid_spec("group(Z2)")
    plus = delta(g, "e") + delta(g, "g")
    minus = delta(g, "e") - delta(g, "g")
    prod = convolve(plus, minus)
    assert prod.is_zero()
    assert osupp_fn(prod) == 0
    assert osupp_fn(plus) == g.product(osupp_fn(plus), osupp_fn(minus)) == 0b11


def test_star_examples():
    g = pair_groupoid(2)
    assert star(delta(g, "(1,2)")) == delta(g, "(2,1)")
    assert star(delta(g, "(1,2)", I)) == delta(g, "(2,1)", -I)
    z2 = parse_groupoid_spec("group(Z2)")
    assert star(delta(z2, "g")) == delta(z2, "g")
    assert osupp_fn(zero_function(g)) == 0


@pytest.mark.parametrize("spec", SPECS)
def test_star_algebra_axioms_on_deltas(spec):
    g = parse_groupoid_spec(spec)
    ds = [delta(g, a) for a in range(g.n_arrows)]
    for a in ds:
        assert star(star(a)) == a
        for b in ds:
            assert star(a * b) == star(b) * star(a)
            for c in ds:
                assert (a * b) * c == a * (b * c)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SPECS), st.randoms(use_true_random=False))
def test_star_algebra_axioms_sampled(spec, rnd):
    g = parse_groupoid_spec(spec)
    f, h, k = (random_function(g, rnd) for _ in range(3))
    c = gr(rnd.choice(["1+i", "-i", "2"]))
    assert (f * h) * k == f * (h * k)
    assert f * (h + k) == f * h + f * k
    assert (f + h) * k == f * k + h * k
    assert (f.scale(c)) * h == (f * h).scale(c)
    assert star(f.scale(c)) == star(f).scale(c.conj())
    assert star(f * h) == star(h) * star(f)
    assert star(star(f)) == f
    unit = GroupoidFunction(g, [ONE if (g.unit_mask >> a) & 1 else ZERO for a in range(g.n_arrows)])
    assert unit * f == f == f * unit


def test_matrix_rep_examples():
    g = pair_groupoid(2)
    e11 = matrix_rep(delta(g, "(1,1)"))
    assert e11 == [[ONE, ZERO], [ZERO, ZERO]]
    assert plain_matmul(e11, e11) == e11
    assert matrix_rep(convolve(delta(g, "(1,2)"), delta(g, "(2,1)"))) == e11


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_matrix_rep_is_star_isomorphism_on_deltas(n):
    g = pair_groupoid(n)
    ds = [delta(g, a) for a in range(g.n_arrows)]
    reps = [matrix_rep(d) for d in ds]
    assert len({tuple(map(tuple, r)) for r in reps}) == n * n  # bijective on the basis
    for a, ra in zip(ds, reps):
        assert matrix_rep(star(a)) == conj_transpose(ra)
        assert from_matrix(g, ra) == a
        for b, rb in zip(ds, reps):
            assert matrix_rep(a * b) == plain_matmul(ra, rb)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_matrix_rep_is_star_isomorphism_on_random_pairs(n):
    g = pair_groupoid(n)
    rng = random.Random(f"matrix_rep:{n}")
    for _ in range(100):
        f, h = random_function(g, rng), random_function(g, rng)
        assert matrix_rep(f * h) == plain_matmul(matrix_rep(f), matrix_rep(h))
        assert matrix_rep(star(f)) == conj_transpose(matrix_rep(f))
        assert matrix_rep(f + h) == [[x + y for x, y in zip(r, s)] for r, s in zip(matrix_rep(f), matrix_rep(h))]


def test_matrix_rep_needs_pair_groupoid():
    with pytest.raises(GroupoidError):
        matrix_rep(delta(parse_groupoid_spec("group(Z2)"), 0))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_local_bisection_convolution_formula(n):
    """For osupp h inside a bisection U: (f*h)(x) = f(x z^-1) h(z) with z in U, d(z) = d(x); else 0."""
    g = pair_groupoid(n)
    rng = random.Random(f"bisection:{n}")
    for u in local_bisections(g):
        f = random_function(g, rng)
        h = GroupoidFunction(g, [random_function(g, rng)[a] if u >> a & 1 else ZERO for a in range(g.n_arrows)])
        fh = f * h
        for x in range(g.n_arrows):
            zs = [z for z in bits(u) if g.dom[z] == g.dom[x]]
            if not zs:
                assert fh[x] == ZERO
                continue
            (z,) = zs
            y = g.mul(x, g.inverse[z])
            assert fh[x] == f[y] * h[z]


@settings(max_examples=40)
@given(st.sampled_from(SPECS), st.randoms(use_true_random=False))
def test_osupp_is_sup_linear(spec, rnd):
    g = parse_groupoid_spec(spec)
    f, h = random_function(g, rnd), random_function(g, rnd)
    c = gr(rnd.choice(["1", "-1", "i", "1+i"]))
    assert osupp_fn(f.scale(c) + h) & ~(osupp_fn(f) | osupp_fn(h)) == 0
    assert osupp_fn(f * h) & ~g.product(osupp_fn(f), osupp_fn(h)) == 0


def test_localizable_every_function_is_a_sum_of_deltas():
    g = pair_groupoid(3)
    f = random_function(g, random.Random("localizable"))
    total = zero_function(g)
    for a in bits(osupp_fn(f)):
        total = total + delta(g, a, f[a])
    assert total == f
