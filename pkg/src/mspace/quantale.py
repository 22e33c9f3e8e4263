"""Finite involutive quantales given by tables, with exhaustive law checks.

Elements are the indices ``0..n-1``.  The order is an ``n x n`` boolean
matrix with ``leq[a, b]`` meaning ``a <= b``; joins and meets are derived from
it once at construction.  Every law sweep is vectorized over the last one or
two arguments, so witnesses come out lexicographically least.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .report import Report

MAX_ELEMENTS = 4096


class StructureError(ValueError):
    """Tables are malformed, or the order is not a lattice."""


class NotAProjection(ValueError):
    pass


def _first(mask: np.ndarray) -> tuple[int, ...] | None:
    hits = np.argwhere(mask)
    if len(hits) == 0:
        return None
    return tuple(int(k) for k in hits[0])


class FiniteSupLattice:
    def __init__(self, leq, join=None, meet=None, check: bool = True):
        leq = np.asarray(leq, dtype=bool)
        if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
            raise StructureError("leq must be a square matrix")
        n = leq.shape[0]
        if n == 0:
            raise StructureError("a lattice needs at least one element")
        if n > MAX_ELEMENTS:
            raise StructureError(f"{n} elements exceeds the materialization limit of {MAX_ELEMENTS}")
        self.n = n
        self.leq = leq
        if check:
            bad = partial_order_violation(leq)
            if bad is not None:
                raise StructureError(f"leq is not a partial order: {bad}")
        self.join = np.asarray(join, dtype=np.int32) if join is not None else _bound_table(leq, upper=True)
        self.meet = np.asarray(meet, dtype=np.int32) if meet is not None else _bound_table(leq, upper=False)
        self.bottom = int(np.flatnonzero(leq.all(axis=1))[0])
        self.top = int(np.flatnonzero(leq.all(axis=0))[0])

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def join_all(self, items) -> int:
        acc = self.bottom
        for x in items:
            acc = int(self.join[acc, x])
        return acc

    def up(self, a: int) -> np.ndarray:
        return np.flatnonzero(self.leq[a])

    def down(self, a: int) -> np.ndarray:
        return np.flatnonzero(self.leq[:, a])


def partial_order_violation(leq: np.ndarray) -> str | None:
    n = leq.shape[0]
    diag = np.flatnonzero(~np.diag(leq))
    if len(diag):
        return f"not reflexive at {int(diag[0])}"
    w = _first(leq & leq.T & ~np.eye(n, dtype=bool))
    if w is not None:
        return f"not antisymmetric at {w}"
    for a in range(n):
        # a <= b <= c must give a <= c
        reach = leq[leq[a]].any(axis=0)
        c = np.flatnonzero(reach & ~leq[a])
        if len(c):
            b = int(np.flatnonzero(leq[a] & leq[:, c[0]])[0])
            return f"not transitive at {(a, b, int(c[0]))}"
    return None


def _bound_table(leq: np.ndarray, upper: bool) -> np.ndarray:
    rel = leq if upper else leq.T
    n = rel.shape[0]
    # the least upper bound is the upper bound with the smallest down-set
    downsize = rel.sum(axis=0)
    out = np.empty((n, n), dtype=np.int32)
    big = n + 1
    for a in range(n):
        ub = rel[a][None, :] & rel
        score = np.where(ub, downsize[None, :], big)
        cand = score.argmin(axis=1)
        if (score[np.arange(n), cand] == big).any():
            b = int(np.flatnonzero(score[np.arange(n), cand] == big)[0])
            raise StructureError(f"no {'join' if upper else 'meet'} for {(a, b)}")
        least = (~ub | rel[cand]).all(axis=1)
        if not least.all():
            b = int(np.flatnonzero(~least)[0])
            raise StructureError(f"no {'join' if upper else 'meet'} for {(a, b)}")
        out[a] = cand
    return out


class FiniteInvolutiveQuantale:
    def __init__(
        self,
        lattice: FiniteSupLattice,
        mult,
        inv,
        unit: int | None = None,
        labels: Sequence[str] | None = None,
    ):
        n = lattice.n
        mult = np.asarray(mult, dtype=np.int32)
        inv = np.asarray(inv, dtype=np.int32)
        if mult.shape != (n, n):
            raise StructureError(f"mult must be {n}x{n}, got {mult.shape}")
        if inv.shape != (n,):
            raise StructureError(f"inv must have length {n}, got {inv.shape}")
        if n and ((mult < 0).any() or (mult >= n).any()):
            raise StructureError("mult has an entry out of range")
        if n and ((inv < 0).any() or (inv >= n).any()):
            raise StructureError("inv has an entry out of range")
        if unit is not None and not 0 <= unit < n:
            raise StructureError("unit out of range")
        if labels is not None and len(labels) != n:
            raise StructureError("labels must name every element")
        self.lattice = lattice
        self.mult = mult
        self.inv = inv
        self.unit = unit
        self.labels = tuple(labels) if labels is not None else None

    @property
    def n(self) -> int:
        return self.lattice.n

    @property
    def leq(self) -> np.ndarray:
        return self.lattice.leq

    @property
    def join(self) -> np.ndarray:
        return self.lattice.join

    @property
    def meet(self) -> np.ndarray:
        return self.lattice.meet

    @property
    def bottom(self) -> int:
        return self.lattice.bottom

    @property
    def top(self) -> int:
        return self.lattice.top

    def mul(self, a: int, b: int) -> int:
        return int(self.mult[a, b])

    def star(self, a: int) -> int:
        return int(self.inv[a])

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def name(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def element(self, a: int) -> dict:
        out = {"index": int(a)}
        if self.labels:
            out["label"] = self.labels[a]
        return out

    def triple_product(self, a: int) -> int:
        """``a a* a``"""
        return int(self.mult[self.mult[a, self.inv[a]], a])

    # serialization

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "leq": self.leq.astype(int).tolist(),
            "mult": self.mult.tolist(),
            "inv": self.inv.tolist(),
            "unit": self.unit,
        }
        if self.labels:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, data: dict) -> FiniteInvolutiveQuantale:
        try:
            n = int(data["n"])
            leq = data["leq"]
            mult = data["mult"]
            inv = data["inv"]
        except (KeyError, TypeError, ValueError) as exc:
            raise StructureError(f"quantale JSON is missing a field: {exc}") from None
        if len(leq) != n or any(len(r) != n for r in leq):
            raise StructureError(f"leq must be {n}x{n}")
        if any(v not in (0, 1, True, False) for r in leq for v in r):
            raise StructureError("leq entries must be 0 or 1")
        unit = data.get("unit")
        return cls(FiniteSupLattice(leq), mult, inv, unit, data.get("labels"))


def load_quantale(path: str) -> FiniteInvolutiveQuantale:
    with open(path, encoding="utf-8") as fh:
        return FiniteInvolutiveQuantale.from_json(json.load(fh))


# law checks


def verify_quantale(q: FiniteInvolutiveQuantale) -> Report:
    rep = Report("quantale", population={"elements": q.n, "mode": "exhaustive"})
    n, m, inv, join, leq = q.n, q.mult, q.inv, q.join, q.leq
    el = q.element

    bad = partial_order_violation(leq)
    rep.add("lattice: partial order", bad is None, {"detail": bad})
    rep.add("lattice: joins and meets", _bounds_consistent(q.lattice) is None, {"pair": _bounds_consistent(q.lattice)})

    def sweep(law: str, fn: Callable[[int], np.ndarray], names: Sequence[str]):
        for a in range(n):
            w = _first(fn(a))
            if w is not None:
                rep.add(law, False, {k: el(v) for k, v in zip(names, (a,) + w)})
                return
        rep.add(law, True)

    sweep("associativity", lambda a: m[m[a]] != m[a][m], "abc")
    sweep("left join distributivity", lambda a: m[a][join] != join[m[a][:, None], m[a][None, :]], "abc")
    sweep("right join distributivity", lambda a: m[join, a] != join[m[:, a][:, None], m[:, a][None, :]], "abc")
    z = q.bottom
    zero_bad = np.flatnonzero((m[:, z] != z) | (m[z, :] != z))
    rep.add("zero absorption", len(zero_bad) == 0, {"a": el(int(zero_bad[0]))} if len(zero_bad) else None)

    twice = np.flatnonzero(inv[inv] != np.arange(n))
    rep.add("involution: a** = a", len(twice) == 0, {"a": el(int(twice[0]))} if len(twice) else None)
    sweep("involution: (ab)* = b*a*", lambda a: inv[m[a]] != m[inv, inv[a]], "ab")
    sweep("involution: (a v b)* = a* v b*", lambda a: inv[join[a]] != join[inv[a], inv], "ab")

    if q.unit is not None:
        e = q.unit
        unit_bad = np.flatnonzero((m[e, :] != np.arange(n)) | (m[:, e] != np.arange(n)))
        rep.add("unit law", len(unit_bad) == 0, {"a": el(int(unit_bad[0]))} if len(unit_bad) else None)
        rep.add("unit self-adjoint e* = e", int(inv[e]) == e, {"e": el(e), "e*": el(int(inv[e]))})
    return rep


def _bounds_consistent(lat: FiniteSupLattice) -> tuple[int, int] | None:
    leq, join, meet = lat.leq, lat.join, lat.meet
    n = lat.n
    idx = np.arange(n)
    for a in range(n):
        j, mt = join[a], meet[a]
        ok = leq[a, j] & leq[idx, j] & leq[mt, a] & leq[mt, idx]
        if not ok.all():
            return (a, int(np.flatnonzero(~ok)[0]))
    return None


@dataclass(frozen=True)
class GelfandResult:
    classification: str
    is_gelfand: bool
    is_stably_gelfand: bool
    is_strongly_gelfand: bool
    witnesses: dict  # failed class -> least witness index

    def to_json(self) -> dict:
        return {
            "class": self.classification,
            "gelfand": self.is_gelfand,
            "stably_gelfand": self.is_stably_gelfand,
            "strongly_gelfand": self.is_strongly_gelfand,
            "witnesses": self.witnesses,
        }


def gelfand_failures(q: FiniteInvolutiveQuantale) -> dict[str, np.ndarray]:
    """All failing elements per class, in increasing index order."""
    idx = np.arange(q.n)
    t = q.mult[q.mult[idx, q.inv], idx]  # a a* a
    up = q.leq[idx, t]  # a <= aa*a
    down = q.leq[t, idx]  # aa*a <= a
    right_sided = q.leq[q.mult[idx, q.top], idx]
    return {
        "strongly Gelfand": np.flatnonzero(~up),
        "stably Gelfand": np.flatnonzero(down & ~up),
        "Gelfand": np.flatnonzero(right_sided & ~up),
    }


def gelfand_class(q: FiniteInvolutiveQuantale) -> GelfandResult:
    fails = gelfand_failures(q)
    strongly = len(fails["strongly Gelfand"]) == 0
    stably = len(fails["stably Gelfand"]) == 0
    gelfand = len(fails["Gelfand"]) == 0
    if strongly:
        cls = "strongly Gelfand"
    elif stably:
        cls = "stably Gelfand"
    elif gelfand:
        cls = "Gelfand"
    else:
        cls = "not Gelfand"
    witnesses = {k: int(v[0]) for k, v in fails.items() if len(v)}
    return GelfandResult(cls, gelfand, stably, strongly, witnesses)


@dataclass(frozen=True)
class SidedElements:
    right: tuple[int, ...]
    left: tuple[int, ...]
    two: tuple[int, ...]
    two_sided_is_locale: bool | None  # None when q is not Gelfand


def sided_elements(q: FiniteInvolutiveQuantale) -> SidedElements:
    idx = np.arange(q.n)
    right = np.flatnonzero(q.leq[q.mult[idx, q.top], idx])
    left = np.flatnonzero(q.leq[q.mult[q.top, idx], idx])
    two = np.intersect1d(right, left)
    locale = None
    if gelfand_class(q).is_gelfand:
        sub = q.mult[np.ix_(two, two)]
        meets = q.meet[np.ix_(two, two)]
        locale = bool((sub == meets).all())
    return SidedElements(tuple(map(int, right)), tuple(map(int, left)), tuple(map(int, two)), locale)


def check_projection(q: FiniteInvolutiveQuantale, b: int) -> None:
    if q.mul(b, b) != b:
        raise NotAProjection(f"element {q.name(b)} is not a projection: b = bb fails")
    if q.star(b) != b:
        raise NotAProjection(f"element {q.name(b)} is not a projection: b = b* fails")


def pseudogroup_Ib(q: FiniteInvolutiveQuantale, b: int) -> tuple[int, ...]:
    """``{s | ss* <= b, s*s <= b, sb <= s, bs <= s}`` by enumeration."""
    check_projection(q, b)
    idx = np.arange(q.n)
    m, inv, leq = q.mult, q.inv, q.leq
    ok = (
        leq[m[idx, inv], b]
        & leq[m[inv, idx], b]
        & leq[m[idx, b], idx]
        & leq[m[b, idx], idx]
    )
    return tuple(int(s) for s in np.flatnonzero(ok))


def partial_units(q: FiniteInvolutiveQuantale) -> tuple[int, ...]:
    if q.unit is None:
        raise StructureError("partial units need a unital quantale")
    return pseudogroup_Ib(q, q.unit)


def frame_law_violation(lat: FiniteSupLattice) -> tuple[int, int, int] | None:
    """Least ``(x, y, z)`` with ``x ^ (y v z) != (x ^ y) v (x ^ z)``."""
    j, mt = lat.join, lat.meet
    for x in range(lat.n):
        w = _first(mt[x][j] != j[mt[x][:, None], mt[x][None, :]])
        if w is not None:
            return (x,) + w
    return None


def is_inverse_quantal_frame(q: FiniteInvolutiveQuantale) -> tuple[bool, Report]:
    rep = Report("inverse quantal frame", population={"elements": q.n, "mode": "exhaustive"})
    rep.add("unital", q.unit is not None)
    g = gelfand_class(q)
    w = g.witnesses.get("stably Gelfand")
    rep.add("stably Gelfand", g.is_stably_gelfand, None if w is None else {"a": q.element(w)})
    fw = frame_law_violation(q.lattice)
    rep.add("frame law", fw is None, None if fw is None else dict(zip("xyz", map(q.element, fw))))
    if q.unit is None:
        rep.add("1 = join of partial units", None, {"reason": "no unit"})
    else:
        top_of_units = q.lattice.join_all(partial_units(q))
        rep.add("1 = join of partial units", top_of_units == q.top, {"join": q.element(top_of_units)})
    ok = all(c.ok for c in rep.checks)
    return ok, rep


# constructions


def direct_sum(l: FiniteInvolutiveQuantale, r: FiniteInvolutiveQuantale) -> FiniteInvolutiveQuantale:
    """Pairwise structure on the product carrier; ``(i, j)`` has index ``i * r.n + j``."""
    nl, nr = l.n, r.n
    if nl * nr > MAX_ELEMENTS:
        raise StructureError(f"direct sum would have {nl * nr} elements")
    leq = np.kron(l.leq, r.leq).astype(bool)

    def pair(tl: np.ndarray, tr: np.ndarray) -> np.ndarray:
        # table over (i1, j1, i2, j2) flattened to (i1*nr+j1, i2*nr+j2)
        t = tl[:, None, :, None] * nr + tr[None, :, None, :]
        return t.reshape(nl * nr, nl * nr)

    join = pair(l.join, r.join)
    meet = pair(l.meet, r.meet)
    mult = pair(l.mult, r.mult)
    inv = (l.inv[:, None] * nr + r.inv[None, :]).reshape(-1)
    unit = None
    if l.unit is not None and r.unit is not None:
        unit = l.unit * nr + r.unit
    labels = None
    if l.labels or r.labels:
        labels = [f"({l.name(i)},{r.name(j)})" for i in range(nl) for j in range(nr)]
    return FiniteInvolutiveQuantale(FiniteSupLattice(leq, join, meet, check=False), mult, inv, unit, labels)


def sum_injections(l: FiniteInvolutiveQuantale, r: FiniteInvolutiveQuantale):
    """Injections and projections of the biproduct, as index arrays."""
    nr = r.n
    i1 = np.arange(l.n) * nr + r.bottom
    i2 = l.bottom * nr + np.arange(nr)
    p1 = np.arange(l.n * nr) // nr
    p2 = np.arange(l.n * nr) % nr
    return i1, i2, p1, p2


def sum_distributivity_violation(l: FiniteInvolutiveQuantale, r: FiniteInvolutiveQuantale, s=None):
    """Least ``(x, m, n)`` breaking ``(x,1) ^ ((1,m) v (1,n)) = ((x,1)^(1,m)) v ((x,1)^(1,n))``."""
    s = s if s is not None else direct_sum(l, r)
    nr = r.n
    for x in range(l.n):
        xa = x * nr + r.top
        ones = l.top * nr + np.arange(nr)
        lhs = s.meet[xa][s.join[ones[:, None], ones[None, :]]]
        mx = s.meet[xa][ones]
        rhs = s.join[mx[:, None], mx[None, :]]
        w = _first(lhs != rhs)
        if w is not None:
            return (x,) + w
    return None


def order_isomorphism(a: FiniteSupLattice, b: FiniteSupLattice) -> tuple[int, ...] | None:
    """An order isomorphism ``a -> b`` as an index map, or None."""
    if a.n != b.n:
        return None
    n = a.n
    da, db = a.leq.sum(axis=0), b.leq.sum(axis=0)
    ua, ub = a.leq.sum(axis=1), b.leq.sum(axis=1)
    if sorted(zip(da, ua)) != sorted(zip(db, ub)):
        return None
    order = sorted(range(n), key=lambda k: (int(da[k]), k))
    cands = {k: [t for t in range(n) if db[t] == da[k] and ub[t] == ua[k]] for k in range(n)}
    image = [-1] * n
    used = [False] * n

    def extend(pos: int) -> bool:
        if pos == n:
            return True
        k = order[pos]
        for t in cands[k]:
            if used[t]:
                continue
            if all(
                a.leq[k, j] == b.leq[t, image[j]] and a.leq[j, k] == b.leq[image[j], t]
                for j in order[:pos]
            ):
                image[k] = t
                used[t] = True
                if extend(pos + 1):
                    return True
                used[t] = False
        image[k] = -1
        return False

    return tuple(image) if extend(0) else None


# catalogue


def powerset_quantale(
    n_atoms: int,
    atom_mult: Callable[[int, int], int | None],
    atom_inv: Callable[[int], int],
    unit_mask: int | None,
    labels: Sequence[str] | None = None,
) -> FiniteInvolutiveQuantale:
    """The quantale of all subsets of ``n_atoms`` atoms with pointwise product.

    Subset ``U`` is the element with index equal to its bitmask.
    """
    size = 1 << n_atoms
    if size > MAX_ELEMENTS:
        raise StructureError(
            f"2^{n_atoms} = {size} elements exceeds the materialization limit of {MAX_ELEMENTS}"
        )
    masks = np.arange(size, dtype=np.int64)
    leq = (masks[:, None] & ~masks[None, :]) == 0
    join = (masks[:, None] | masks[None, :]).astype(np.int32)
    meet = (masks[:, None] & masks[None, :]).astype(np.int32)
    low = masks & -masks
    lowbit = np.zeros(size, dtype=np.int64)
    lowbit[1:] = np.log2(low[1:]).astype(np.int64)
    rest = masks & (masks - 1)
    # single-atom rows, built by peeling the lowest atom off the right factor
    atom_rows = np.zeros((n_atoms, size), dtype=np.int64)
    for a in range(n_atoms):
        row = atom_rows[a]
        for v in range(1, size):
            c = atom_mult(a, int(lowbit[v]))
            row[v] = row[rest[v]] | ((1 << c) if c is not None else 0)
    mult = np.zeros((size, size), dtype=np.int64)
    for u in range(1, size):
        mult[u] = mult[rest[u]] | atom_rows[lowbit[u]]
    inv = np.zeros(size, dtype=np.int64)
    for u in range(1, size):
        inv[u] = inv[rest[u]] | (1 << atom_inv(int(lowbit[u])))
    lat = FiniteSupLattice(leq, join, meet, check=False)
    return FiniteInvolutiveQuantale(lat, mult.astype(np.int32), inv.astype(np.int32), unit_mask, labels)


def mask_label(mask: int, atom_names: Sequence[str]) -> str:
    return "{" + ",".join(atom_names[k] for k in range(len(atom_names)) if mask >> k & 1) + "}"


def relations_quantale(n: int) -> FiniteInvolutiveQuantale:
    """Binary relations on ``{1..n}``: composition, reversal, unit the diagonal.

    Pair ``(x, y)`` is atom ``x * n + y`` (zero-based).
    """

    def mul(a: int, b: int) -> int | None:
        x, y = divmod(a, n)
        y2, z = divmod(b, n)
        return x * n + z if y == y2 else None

    def inv(a: int) -> int:
        x, y = divmod(a, n)
        return y * n + x

    unit = sum(1 << (x * n + x) for x in range(n))
    names = [f"({x + 1},{y + 1})" for x in range(n) for y in range(n)]
    labels = [mask_label(u, names) for u in range(1 << (n * n))]
    return powerset_quantale(n * n, mul, inv, unit, labels)


def locale_quantale(lat: FiniteSupLattice, labels: Sequence[str] | None = None) -> FiniteInvolutiveQuantale:
    """A lattice as a quantale with meet multiplication, trivial involution, unit top."""
    return FiniteInvolutiveQuantale(lat, lat.meet.copy(), np.arange(lat.n), lat.top, labels)


def chain_order(k: int) -> np.ndarray:
    idx = np.arange(k)
    return idx[:, None] <= idx[None, :]


def chain(k: int) -> FiniteInvolutiveQuantale:
    return locale_quantale(FiniteSupLattice(chain_order(k)))


def two() -> FiniteInvolutiveQuantale:
    """The Sierpinski locale {0 < 1}."""
    return locale_quantale(FiniteSupLattice(chain_order(2)), ["0", "1"])


def one_element() -> FiniteInvolutiveQuantale:
    return FiniteInvolutiveQuantale(FiniteSupLattice([[True]]), [[0]], [0], 0, ["0"])


def boolean_algebra(k: int) -> FiniteInvolutiveQuantale:
    """Subsets of a k-element set as a locale; subset ``U`` has index ``U``."""
    size = 1 << k
    masks = np.arange(size)
    leq = (masks[:, None] & ~masks[None, :]) == 0
    lat = FiniteSupLattice(leq, masks[:, None] | masks[None, :], masks[:, None] & masks[None, :], check=False)
    return locale_quantale(lat)


def chain3_bad() -> FiniteInvolutiveQuantale:
    """0 < a < 1 with 1*1 = a, every other product 0, trivial involution."""
    mult = np.zeros((3, 3), dtype=np.int32)
    mult[2, 2] = 1
    return FiniteInvolutiveQuantale(FiniteSupLattice(chain_order(3)), mult, [0, 1, 2], None, ["0", "a", "1"])
