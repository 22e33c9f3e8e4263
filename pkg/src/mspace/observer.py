"""Observer maps ``p = (iota, r)`` and the law sweeps that verify them.

Carriers wrap the three kinds of structure an observer can connect: finite
quantale tables, arrow sets of a groupoid, and finitely presented subspaces
of a groupoid algebra.  Every law is checked over a declared population:

* domain: every delta-spanned subspace when the groupoid has at most 12
  arrows, plus ``samples`` seeded random subspaces;
* codomain: every arrow set when there are at most ``threshold`` of them.

A law with several arguments runs over all tuples when there are at most
``threshold`` of them.  Otherwise it runs ``max(samples, len(first list))``
tuples: the first argument cycles through its whole list and the rest are
drawn from an RNG seeded with ``"{seed}:{law}"``.  Exhaustive sweeps report
the lexicographically least witness; sampled sweeps report the first one
found together with the seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import prod
from typing import Any, Callable, Iterable, Iterator, Sequence

from .groupoid import FiniteGroupoid, is_bisection, local_bisections, structure_report
from .powerspace import (
    PowerspaceElement,
    iota_Cc,
    max_involute,
    max_join,
    max_leq,
    max_product,
    max_top,
    max_zero,
    random_element,
    span,
)
from .quantale import FiniteInvolutiveQuantale, is_inverse_quantal_frame
from .report import Report
from .space import bits

DEFAULT_SAMPLES = 512
DEFAULT_THRESHOLD = 4096
EXHAUSTIVE_ARROWS = 12

SUITES = (
    "axioms",
    "etale",
    "istable",
    "increasing",
    "full",
    "multiplicative",
    "increasing_full_multiplicative",
    "persistency",
    "pseudogroup",
    "base",
    "all",
)


class ObserverError(ValueError):
    pass


# carriers


class ArrowSetCarrier:
    """Arrow sets of ``g`` below ``universe`` (all of them by default)."""

    def __init__(self, g: FiniteGroupoid, universe: int | None = None):
        self.g = g
        self.top = g.full if universe is None else universe
        self.zero = 0
        self.unit = g.unit_mask if g.unit_mask & ~self.top == 0 else None

    def join(self, a: int, b: int) -> int:
        return a | b

    def mul(self, a: int, b: int) -> int:
        return self.g.product(a, b)

    def star(self, a: int) -> int:
        return self.g.invert(a)

    def leq(self, a: int, b: int) -> bool:
        return a & ~b == 0

    def eq(self, a: int, b: int) -> bool:
        return a == b

    def is_partial_unit(self, a: int) -> bool:
        return is_bisection(self.g, a)

    def elements(self) -> list[int]:
        out = []
        sub = self.top
        while True:
            out.append(sub)
            if sub == 0:
                break
            sub = (sub - 1) & self.top
        return sorted(out)

    def count(self) -> int:
        return 1 << bin(self.top).count("1")

    def describe(self, a: int) -> Any:
        return self.g.set_names(a)


class QuantaleCarrier:
    def __init__(self, q: FiniteInvolutiveQuantale, members: Sequence[int] | None = None, top: int | None = None, unit: int | None = None):
        self.q = q
        self.members = list(members) if members is not None else list(range(q.n))
        self.top = q.top if top is None else top
        self.zero = q.bottom
        self.unit = q.unit if unit is None else unit

    def join(self, a: int, b: int) -> int:
        return int(self.q.join[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.q.mult[a, b])

    def star(self, a: int) -> int:
        return int(self.q.inv[a])

    def leq(self, a: int, b: int) -> bool:
        return bool(self.q.leq[a, b])

    def eq(self, a: int, b: int) -> bool:
        return a == b

    def is_partial_unit(self, a: int) -> bool:
        e = self.unit
        return self.leq(self.mul(a, self.star(a)), e) and self.leq(self.mul(self.star(a), a), e)

    def elements(self) -> list[int]:
        return list(self.members)

    def count(self) -> int:
        return len(self.members)

    def describe(self, a: int) -> Any:
        return self.q.name(a)


class PowerspaceCarrier:
    def __init__(self, g: FiniteGroupoid):
        self.g = g
        self.zero = max_zero(g)
        self.top = max_top(g)
        self.base = iota_Cc(g, g.unit_mask)

    def join(self, a, b):
        return max_join(a, b)

    def mul(self, a, b):
        return max_product(a, b)

    def star(self, a):
        return max_involute(a)

    def leq(self, a, b) -> bool:
        return max_leq(a, b)

    def eq(self, a, b) -> bool:
        return a == b

    def describe(self, a: PowerspaceElement) -> Any:
        return a.to_json()


def ib_conditions(c, s, b) -> dict[str, bool]:
    """The four membership conditions of the pseudogroup at projection ``b``."""
    st = c.star(s)
    return {
        "ss* <= b": c.leq(c.mul(s, st), b),
        "s*s <= b": c.leq(c.mul(st, s), b),
        "sb <= s": c.leq(c.mul(s, b), s),
        "bs <= s": c.leq(c.mul(b, s), s),
    }


def in_ib(c, s, b) -> bool:
    return all(ib_conditions(c, s, b).values())


# observers


@dataclass
class ObserverMap:
    name: str
    domain: Any
    codomain: Any
    iota: Callable
    retraction: Callable
    groupoid: FiniteGroupoid | None = None
    exhaustive_domain: bool = False  # domain small enough to list in full

    def iota_of(self, w):
        return self.iota(w)

    def r(self, m):
        return self.retraction(m)


def build_canonical_observer(g: FiniteGroupoid) -> ObserverMap:
    """``iota(U)`` = span of deltas on ``U``; ``r(V)`` = open support of ``V``."""
    iota = lru_cache(maxsize=None)(lambda u: iota_Cc(g, u))
    return ObserverMap(
        f"canonical observer of {g.kind}",
        PowerspaceCarrier(g),
        ArrowSetCarrier(g),
        iota,
        lambda v: v.osupp(),
        g,
    )


def identity_observer(q: FiniteInvolutiveQuantale) -> ObserverMap:
    c = QuantaleCarrier(q)
    return ObserverMap("identity observer", c, c, lambda w: w, lambda m: m, exhaustive_domain=True)


def local_observer_of_iqf(q: FiniteInvolutiveQuantale) -> ObserverMap:
    """Base locale ``{b <= e}`` with the retraction ``m -> m ^ e``."""
    ok, rep = is_inverse_quantal_frame(q)
    if not ok:
        failed = ", ".join(c.law for c in rep.checks if not c.ok)
        raise ObserverError(f"not an inverse quantal frame: {failed}")
    e = q.unit
    base = [int(b) for b in q.lattice.down(e)]
    cod = QuantaleCarrier(q, base, top=e, unit=e)
    return ObserverMap(
        "local observer",
        QuantaleCarrier(q),
        cod,
        lambda w: w,
        lambda m: int(q.meet[m, e]),
        exhaustive_domain=True,
    )


def base_observer(obs: ObserverMap) -> ObserverMap:
    """The canonical observer followed by the local observer of its arrow-set quantale."""
    g = obs.groupoid
    if g is None:
        raise ObserverError("base observer needs a groupoid observer")
    units = g.unit_mask
    return ObserverMap(
        f"base observer of {g.kind}",
        obs.domain,
        ArrowSetCarrier(g, universe=units),
        obs.iota,
        lambda m: obs.retraction(m) & units,
        g,
    )


# populations


@dataclass
class Population:
    domain: list
    codomain: list
    info: dict = field(default_factory=dict)
    seed: int = 0
    samples: int = DEFAULT_SAMPLES
    threshold: int = DEFAULT_THRESHOLD


def standard_population(obs: ObserverMap, seed: int = 0, samples: int = DEFAULT_SAMPLES, threshold: int = DEFAULT_THRESHOLD) -> Population:
    if obs.exhaustive_domain:
        dom = obs.domain.elements()
        cod = obs.codomain.elements()
        info = {"mode": "exhaustive", "domain": len(dom), "codomain": len(cod)}
        return Population(dom, cod, info, seed, samples, threshold)
    g = obs.groupoid
    n = g.n_arrows
    dom: list = []
    info: dict[str, Any] = {}
    if n <= EXHAUSTIVE_ARROWS:
        dom.extend(iota_Cc(g, u) for u in range(1 << n))
        info["delta_spans"] = len(dom)
    rng = random.Random(f"{seed}:population")
    dom.extend(random_element(g, rng) for _ in range(samples))
    info["random_subspaces"] = samples
    if obs.codomain.count() <= threshold:
        cod = obs.codomain.elements()
        info["codomain"] = f"all {len(cod)} arrow sets"
    else:
        top = obs.codomain.top
        crng = random.Random(f"{seed}:codomain")
        cod = sorted({0, top, obs.codomain.unit or 0} | {crng.getrandbits(n) & top for _ in range(samples)})
        info["codomain"] = f"{len(cod)} sampled arrow sets"
    info["samples"] = samples
    info["threshold"] = threshold
    info["mode"] = "exhaustive delta + seeded random" if n <= EXHAUSTIVE_ARROWS else "seeded random"
    return Population(dom, cod, info, seed, samples, threshold)


def tuples(sizes: Sequence[int], law: str, seed: int, samples: int, threshold: int) -> tuple[Iterator[tuple], bool]:
    """Index tuples to test and whether the sweep is exhaustive."""
    total = prod(sizes)
    if total <= threshold:
        return product(*(range(s) for s in sizes)), True

    def sampled():
        rng = random.Random(f"{seed}:{law}")
        first = sizes[0]
        for i in range(max(samples, first)):
            yield (i % first,) + tuple(rng.randrange(s) for s in sizes[1:])

    return sampled(), False


class _Sweeper:
    def __init__(self, obs: ObserverMap, pop: Population, rep: Report):
        self.obs = obs
        self.pop = pop
        self.rep = rep

    def describe(self, role: str, idx: int, value) -> dict:
        carrier = self.obs.codomain if role == "w" else self.obs.domain
        return {"index": idx, "value": carrier.describe(value)}

    def run(
        self,
        law: str,
        lists: Sequence[tuple[str, list]],
        pred: Callable[..., bool],
        forced: Iterable[tuple] = (),
        info: dict | None = None,
    ) -> bool:
        """``lists`` pairs a role ('m' domain, 'w' codomain) and argument name with its values."""
        names = [nm for nm, _ in lists]
        values = [vals for _, vals in lists]
        it, exhaustive = tuples([len(v) for v in values], law, self.pop.seed, self.pop.samples, self.pop.threshold)
        tested = 0
        seen: set = set()
        for idx in list(forced) + [None]:
            if idx is None:
                break
            seen.add(idx)
            tested += 1
            if not pred(*(v[k] for v, k in zip(values, idx))):
                return self._fail(law, names, values, idx, exhaustive, info)
        for idx in it:
            if idx in seen:
                continue
            tested += 1
            if not pred(*(v[k] for v, k in zip(values, idx))):
                return self._fail(law, names, values, idx, exhaustive, info)
        extra = {"tested": tested, "exhaustive": exhaustive}
        if info:
            extra.update(info)
        self.rep.add(law, True, info=extra)
        return True

    def _fail(self, law, names, values, idx, exhaustive, info) -> bool:
        wit = {}
        for nm, v, k in zip(names, values, idx):
            wit[nm] = self.describe(nm[0], k, v[k])
        if not exhaustive:
            wit["seed"] = self.pop.seed
        self.rep.add(law, False, wit, info=info)
        return False


def _suite_axioms(obs: ObserverMap, pop: Population, rep: Report) -> None:
    s = _Sweeper(obs, pop, rep)
    M, C = obs.domain, obs.codomain
    io, r = obs.iota, obs.retraction
    dom, cod = pop.domain, pop.codomain

    s.run("iota preserves joins", [("w1", cod), ("w2", cod)], lambda a, b: M.eq(io(C.join(a, b)), M.join(io(a), io(b))))
    rep.add("iota preserves 0", M.eq(io(C.zero), M.zero))
    s.run("iota preserves products", [("w1", cod), ("w2", cod)], lambda a, b: M.eq(io(C.mul(a, b)), M.mul(io(a), io(b))))
    s.run("iota preserves involution", [("w", cod)], lambda a: M.eq(io(C.star(a)), M.star(io(a))))
    s.run("retraction preserves joins", [("m1", dom), ("m2", dom)], lambda a, b: C.eq(r(M.join(a, b)), C.join(r(a), r(b))))
    rep.add("retraction preserves 0", C.eq(r(M.zero), C.zero))
    s.run("symmetry condition: r(m*) = r(m)*", [("m", dom)], lambda a: C.eq(r(M.star(a)), C.star(r(a))))
    s.run(
        "preparation condition: r(m iota(w)) = r(m) w",
        [("m", dom), ("w", cod)],
        lambda a, w: C.eq(r(M.mul(a, io(w))), C.mul(r(a), w)),
    )
    s.run("retraction of embedding: r(iota(w)) = w", [("w", cod)], lambda w: C.eq(r(io(w)), w))
    s.run(
        "result condition: r(iota(w) m) = w r(m)",
        [("w", cod), ("m", dom)],
        lambda w, a: C.eq(r(M.mul(io(w), a)), C.mul(w, r(a))),
    )

    def closed(a, b) -> bool:
        # the product of two images is the image of the retraction of that product
        p = M.mul(io(a), io(b))
        return M.eq(io(r(p)), p) and M.eq(io(r(M.star(io(a)))), M.star(io(a)))

    s.run("image closed under product and involution", [("w1", cod), ("w2", cod)], closed)


def _partial_unit_members(obs: ObserverMap, pop: Population) -> list:
    C, r = obs.codomain, obs.retraction
    return [m for m in pop.domain if C.is_partial_unit(r(m))]


def _suite_etale(obs: ObserverMap, pop: Population, rep: Report) -> None:
    s = _Sweeper(obs, pop, rep)
    M, C = obs.domain, obs.codomain
    io, r = obs.iota, obs.retraction
    if C.unit is None:
        rep.add("etale: r(m) w r(n) <= r(m iota(w) n)", None, {"reason": "codomain is not unital"})
        return
    members = _partial_unit_members(obs, pop)
    strict: list = []

    def etale(a, w, b) -> bool:
        lhs = C.mul(C.mul(r(a), w), r(b))
        rhs = r(M.mul(M.mul(a, io(w)), b))
        if not C.leq(lhs, rhs):
            return False
        if not strict and not C.eq(lhs, rhs):
            strict.append({"m": M.describe(a), "w": C.describe(w), "n": M.describe(b)})
        return True

    s.run("etale: r(m) w r(n) <= r(m iota(w) n)", [("m", members), ("w", pop.codomain), ("n", members)], etale,
          info={"eligible": len(members)})
    last = rep.checks[-1]
    last.info = dict(last.info or {}, strict_instance=strict[0] if strict else None)


def _ib_population(obs: ObserverMap, pop: Population, b) -> list:
    M = obs.domain
    out = []
    keys = set()
    for m in [M.zero, b] + list(pop.domain):
        for cand in (m, M.star(m)):
            k = _key(cand)
            if k in keys:
                continue
            if in_ib(M, cand, b):
                keys.add(k)
                out.append(cand)
    return out


def _key(x):
    return x.key() if isinstance(x, PowerspaceElement) else x


def _suite_istable(obs: ObserverMap, pop: Population, rep: Report) -> None:
    s = _Sweeper(obs, pop, rep)
    M, C = obs.domain, obs.codomain
    io, r = obs.iota, obs.retraction
    if C.unit is None:
        rep.add("I-stability equivalence", None, {"reason": "codomain is not unital"})
        return
    e = C.unit
    b = io(e)
    ib = _ib_population(obs, pop, b)
    info = {"members": len(ib)}
    star_index = {}
    keyed = {_key(x): k for k, x in enumerate(ib)}
    for k, x in enumerate(ib):
        star_index[k] = keyed.get(_key(M.star(x)), k)
    pairs = [p for k in range(len(ib)) for p in ((star_index[k], k), (k, star_index[k]))]
    cod = list(pop.codomain)
    if e not in cod:
        cod = [e] + cod
    e_idx = cod.index(e)
    trip = [(a, e_idx, c) for a, c in pairs]

    c1 = s.run("I-stable (1): r(s) in I(Omega)", [("m", ib)], lambda x: C.is_partial_unit(r(x)), info=info)
    c2 = s.run(
        "I-stable (2): r(s) r(t) <= r(st)",
        [("m1", ib), ("m2", ib)],
        lambda x, y: C.leq(C.mul(r(x), r(y)), r(M.mul(x, y))),
        forced=pairs,
        info=info,
    )
    c3 = s.run(
        "I-stable (3): r(s) w r(t) <= r(s iota(w) t)",
        [("m1", ib), ("w", cod), ("m2", ib)],
        lambda x, w, y: C.leq(C.mul(C.mul(r(x), w), r(y)), r(M.mul(M.mul(x, io(w)), y))),
        forced=trip,
        info=info,
    )
    agree = c1 == c2 == c3
    rep.add("I-stability equivalence", agree, {"conditions": [c1, c2, c3]})


def _suite_increasing(obs: ObserverMap, pop: Population, rep: Report) -> None:
    s = _Sweeper(obs, pop, rep)
    M, io, r = obs.domain, obs.iota, obs.retraction
    s.run("increasing: V <= iota(r(V))", [("m", pop.domain)], lambda v: M.leq(v, io(r(v))))


def _suite_full(obs: ObserverMap, pop: Population, rep: Report) -> None:
    M, C = obs.domain, obs.codomain
    top = obs.iota(C.top)
    rep.add("full: iota(1) = 1", M.eq(top, M.top), {"iota(1)": M.describe(top)})


def _suite_multiplicative(obs: ObserverMap, pop: Population, rep: Report) -> None:
    s = _Sweeper(obs, pop, rep)
    M, C, r = obs.domain, obs.codomain, obs.retraction
    s.run(
        "multiplicative: r(mn) <= r(m) r(n)",
        [("m1", pop.domain), ("m2", pop.domain)],
        lambda a, b: C.leq(r(M.mul(a, b)), C.mul(r(a), r(b))),
    )


# persistency


@dataclass
class PersistencyResult:
    persistent: bool  # no witness in the population
    witness: dict | None
    searched: int
    exhaustive_phase: bool


def coefficient_spans(g: FiniteGroupoid) -> list[PowerspaceElement]:
    """Spans of single nonzero vectors with entries in {0, 1, -1}, deduplicated up to sign.

    Enumerated in lexicographic order with coefficient order (0, 1, -1).
    """
    out = []
    seen = set()
    for coeffs in product((0, 1, -1), repeat=g.n_arrows):
        if not any(coeffs):
            continue
        lead = next(c for c in coeffs if c)
        norm = tuple(c * lead for c in coeffs)
        if norm in seen:
            continue
        seen.add(norm)
        out.append(span(g, [coeffs]))
    return out


def find_persistency_witness(obs: ObserverMap, pop: Population, coefficient_search: bool = True) -> PersistencyResult:
    """Search for ``(m, w, n)`` with ``r(m iota(w) n) != r(m) w r(n)``.

    Phase one tries spans of single {0, +-1} vectors when the triple count is
    within the threshold (exhaustively, so the witness is least); phase two
    sweeps the standard population.
    """
    M, C = obs.domain, obs.codomain
    io, r = obs.iota, obs.retraction

    def holds(a, w, b) -> bool:
        return C.eq(r(M.mul(M.mul(a, io(w)), b)), C.mul(C.mul(r(a), w), r(b)))

    searched = 0
    phases = []
    if coefficient_search and obs.groupoid is not None and 3 ** obs.groupoid.n_arrows <= pop.threshold:
        spans = coefficient_spans(obs.groupoid)
        if len(spans) ** 2 * len(pop.codomain) <= pop.threshold:
            phases.append(("coefficient spans", spans))
    phases.append(("population", pop.domain))
    first_exhaustive = False
    for pi, (label, dom) in enumerate(phases):
        it, exhaustive = tuples([len(dom), len(pop.codomain), len(dom)], f"persistency:{label}", pop.seed, pop.samples, pop.threshold)
        if pi == 0:
            first_exhaustive = exhaustive
        for i, j, k in it:
            searched += 1
            a, w, b = dom[i], pop.codomain[j], dom[k]
            if not holds(a, w, b):
                lhs = r(M.mul(M.mul(a, io(w)), b))
                rhs = C.mul(C.mul(r(a), w), r(b))
                wit = {
                    "search": label,
                    "m": {"index": i, "value": M.describe(a)},
                    "w": {"index": j, "value": C.describe(w)},
                    "n": {"index": k, "value": M.describe(b)},
                    "r(m iota(w) n)": C.describe(lhs),
                    "r(m) w r(n)": C.describe(rhs),
                }
                if not exhaustive:
                    wit["seed"] = pop.seed
                return PersistencyResult(False, wit, searched, first_exhaustive)
    return PersistencyResult(True, None, searched, first_exhaustive)


def _suite_persistency(obs: ObserverMap, pop: Population, rep: Report) -> None:
    res = find_persistency_witness(obs, pop)
    principal = structure_report(obs.groupoid).principal if obs.groupoid is not None else None
    info = {"searched": res.searched}
    if res.witness is not None:
        rep.add("persistency", False, res.witness, info)
        rep.summary["persistency"] = "witness found"
    elif principal is False:
        rep.add("persistency", None, {"reason": "no witness in the population"}, info)
        rep.summary["persistency"] = "inconclusive: no witness found"
    else:
        rep.add("persistency", True, info=info)
        rep.summary["persistency"] = "persistent over population"

    if principal is not None:
        found = res.witness is not None
        rep.add("theorem: principal implies persistent", not (principal and found), {"principal": principal})
        if found or principal:
            rep.add("theorem: persistent implies principal", True)
        else:
            rep.add("theorem: persistent implies principal", None, {"reason": "no witness and not principal"})

    if res.witness is None:
        _persistent_iteration(obs, pop, rep)
    else:
        rep.add("persistent iteration (depth 2)", None, {"reason": "observer is not persistent"})


def _persistent_iteration(obs: ObserverMap, pop: Population, rep: Report) -> None:
    s = _Sweeper(obs, pop, rep)
    M, C, io, r = obs.domain, obs.codomain, obs.iota, obs.retraction

    def law(a, w, b, w2, c) -> bool:
        lhs = r(M.mul(M.mul(M.mul(M.mul(a, io(w)), b), io(w2)), c))
        rhs = C.mul(C.mul(C.mul(C.mul(r(a), w), r(b)), w2), r(c))
        return C.eq(lhs, rhs)

    dom, cod = pop.domain, pop.codomain
    s.run("persistent iteration (depth 2)", [("m1", dom), ("w1", cod), ("m2", dom), ("w2", cod), ("m3", dom)], law)


# pseudogroups


def negative_probe(g: FiniteGroupoid) -> PowerspaceElement | None:
    """``<delta_x + delta_x^-1>`` for the first arrow ``x`` with distinct ends."""
    for x in range(g.n_arrows):
        if g.dom[x] != g.cod[x]:
            row = [0] * g.n_arrows
            row[x] = 1
            row[g.inverse[x]] = 1
            return span(g, [row])
    return None


def pseudogroup_correspondence(g: FiniteGroupoid, pop: Population | None = None, obs: ObserverMap | None = None) -> Report:
    if not structure_report(g).principal:
        raise ObserverError(f"{g.kind} is not principal; the pseudogroup correspondence assumes it")
    obs = obs or build_canonical_observer(g)
    M = obs.domain
    io, r = obs.iota, obs.retraction
    b = io(g.unit_mask)
    bis = local_bisections(g)
    rep = Report("pseudogroup")

    w = next(
        ({"U": g.set_names(u), "failed": [k for k, v in ib_conditions(M, io(u), b).items() if not v]} for u in bis if not in_ib(M, io(u), b)),
        None,
    )
    rep.add("iota(U) in I_B for every bisection U", w is None, w, {"bisections": len(bis)})
    w = next(({"U": g.set_names(u)} for u in bis if r(io(u)) != u), None)
    rep.add("r(iota(U)) = U", w is None, w)
    w = next(
        ({"U": g.set_names(u), "V": g.set_names(v)} for u in bis for v in bis if io(g.product(u, v)) != max_product(io(u), io(v))),
        None,
    )
    rep.add("iota(U) iota(V) = iota(UV)", w is None, w, {"pairs": len(bis) ** 2})

    images = {io(u).key() for u in bis}
    if pop is not None:
        members = [m for m in pop.domain if in_ib(M, m, b)]
        w = next(({"s": M.describe(m)} for m in members if io(r(m)) != m or r(m) not in bis), None)
        rep.add("every sampled member of I_B is iota of a bisection", w is None, w, {"members": len(members)})
        images |= {m.key() for m in members}

    probe = negative_probe(g)
    if probe is not None:
        conds = ib_conditions(M, probe, b)
        rep.add(
            "negative probe fails sB <= s",
            not conds["sb <= s"],
            {"probe": M.describe(probe), "conditions": conds},
            {"probe": M.describe(probe), "dim sB": max_product(probe, b).dim},
        )
    rep.summary["pseudogroup"] = f"{len(bis)} ↔ {len(images)} bijection verified" if rep.ok and len(images) == len(bis) else "bijection not verified"
    if len(images) != len(bis):
        rep.add("bijection", False, {"bisections": len(bis), "subspaces": len(images)})
    return rep


# entry point


def verify_observer(
    obs: ObserverMap,
    suite: str = "axioms",
    pop: Population | None = None,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
    threshold: int = DEFAULT_THRESHOLD,
) -> Report:
    if suite not in SUITES:
        raise ObserverError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    pop = pop or standard_population(obs, seed, samples, threshold)
    if not pop.domain:
        raise ObserverError("population is empty")
    rep = Report(suite, population=dict(pop.info), seed=pop.seed)
    rep.summary["observer"] = obs.name
    wanted = {
        "increasing_full_multiplicative": ("increasing", "full", "multiplicative"),
        "all": ("axioms", "etale", "istable", "increasing", "full", "multiplicative", "persistency", "pseudogroup", "base"),
    }.get(suite, (suite,))
    for part in wanted:
        if part == "axioms":
            _suite_axioms(obs, pop, rep)
        elif part == "etale":
            _suite_etale(obs, pop, rep)
        elif part == "istable":
            _suite_istable(obs, pop, rep)
        elif part == "increasing":
            _suite_increasing(obs, pop, rep)
        elif part == "full":
            _suite_full(obs, pop, rep)
        elif part == "multiplicative":
            _suite_multiplicative(obs, pop, rep)
        elif part == "persistency":
            _suite_persistency(obs, pop, rep)
        elif part == "pseudogroup":
            g = obs.groupoid
            if g is None:
                rep.add("pseudogroup correspondence", None, {"reason": "observer has no groupoid"})
            elif not structure_report(g).principal:
                if suite == "pseudogroup":
                    raise ObserverError(f"{g.kind} is not principal; the pseudogroup correspondence assumes it")
                rep.add("pseudogroup correspondence", None, {"reason": "groupoid is not principal"})
            else:
                rep.extend(pseudogroup_correspondence(g, pop, obs))
        elif part == "base":
            if obs.groupoid is None:
                continue
            base = base_observer(obs)
            sub = Report("base")
            bpop = Population(pop.domain, base.codomain.elements(), pop.info, pop.seed, pop.samples, pop.threshold)
            _suite_axioms(base, bpop, sub)
            rep.extend(sub, prefix="base observer: ")
    return rep


def population_from(obs: ObserverMap, domain: Iterable, codomain: Iterable, seed: int = 0, samples: int = DEFAULT_SAMPLES, threshold: int = DEFAULT_THRESHOLD) -> Population:
    dom, cod = list(domain), list(codomain)
    return Population(dom, cod, {"mode": "explicit", "domain": len(dom), "codomain": len(cod)}, seed, samples, threshold)


def arrow_sets(g: FiniteGroupoid) -> list[int]:
    return list(range(1 << g.n_arrows))


def describe_mask(g: FiniteGroupoid, u: int) -> list[str]:
    return [g.names[k] for k in bits(u)]
