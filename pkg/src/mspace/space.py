"""Finite topological spaces on at most 16 points.

Points are ``0..n-1``; a subset is an int bitmask.  The specialization
order follows the convention ``m <= n  iff  m`` lies in the closure of ``{n}``,
so open sets are up-closed.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .report import Report

MAX_POINTS = 16


class SpaceError(ValueError):
    pass


def bits(mask: int) -> list[int]:
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


def to_mask(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


@dataclass(frozen=True)
class FiniteTopSpace:
    n: int
    opens: frozenset

    def __init__(self, n: int, opens: Iterable):
        if not 0 <= n <= MAX_POINTS:
            raise SpaceError(f"at most {MAX_POINTS} points are supported, got {n}")
        full = (1 << n) - 1
        ops = frozenset(o if isinstance(o, int) else to_mask(o) for o in opens)
        if any(o & ~full for o in ops):
            raise SpaceError("an open set mentions a point out of range")
        if 0 not in ops or full not in ops:
            raise SpaceError("opens must contain the empty set and the whole space")
        for u in ops:
            for v in ops:
                if u | v not in ops:
                    raise SpaceError(f"opens not closed under union: {bits(u)} | {bits(v)}")
                if u & v not in ops:
                    raise SpaceError(f"opens not closed under intersection: {bits(u)} & {bits(v)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "opens", ops)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def closed_sets(self) -> list[int]:
        return sorted(self.full & ~o for o in self.opens)

    def closure(self, s: int) -> int:
        disjoint = 0
        for o in self.opens:
            if not o & s:
                disjoint |= o
        return self.full & ~disjoint

    def neighbourhood(self, x: int) -> int:
        """The smallest open set containing ``x``."""
        acc = self.full
        for o in self.opens:
            if o >> x & 1:
                acc &= o
        return acc

    def to_json(self) -> dict:
        return {"n": self.n, "opens": [bits(o) for o in sorted(self.opens)]}

    @classmethod
    def from_json(cls, data: dict) -> FiniteTopSpace:
        try:
            return cls(int(data["n"]), [list(map(int, o)) for o in data["opens"]])
        except (KeyError, TypeError) as exc:
            raise SpaceError(f"space JSON is malformed: {exc}") from None


def load_space(path: str) -> FiniteTopSpace:
    with open(path, encoding="utf-8") as fh:
        return FiniteTopSpace.from_json(json.load(fh))


def specialization_order(s: FiniteTopSpace) -> np.ndarray:
    """``leq[m, n]`` iff ``m`` is in the closure of ``{n}``."""
    leq = np.zeros((s.n, s.n), dtype=bool)
    for n in range(s.n):
        cl = s.closure(1 << n)
        for m in bits(cl):
            leq[m, n] = True
    return leq


def _up_masks(leq: np.ndarray) -> list[int]:
    return [to_mask(np.flatnonzero(leq[x])) for x in range(leq.shape[0])]


def alexandrov_space(leq) -> FiniteTopSpace:
    """All up-closed sets of a finite partial order."""
    leq = np.asarray(leq, dtype=bool)
    n = leq.shape[0]
    if leq.shape != (n, n):
        raise SpaceError("order must be a square matrix")
    if n > MAX_POINTS:
        raise SpaceError(f"at most {MAX_POINTS} points are supported")
    if not np.diag(leq).all() or (leq & leq.T & ~np.eye(n, dtype=bool)).any():
        raise SpaceError("input is not a partial order")
    if ((leq.astype(np.int64) @ leq.astype(np.int64) > 0) & ~leq).any():
        raise SpaceError("input is not a partial order")
    up = _up_masks(leq)
    opens = [u for u in range(1 << n) if all(up[x] & ~u == 0 for x in bits(u))]
    return FiniteTopSpace(n, opens)


def t0_violation(s: FiniteTopSpace) -> tuple[int, int] | None:
    leq = specialization_order(s)
    for m in range(s.n):
        for n in range(m + 1, s.n):
            if leq[m, n] and leq[n, m]:
                return (m, n)
    return None


def is_irreducible(s: FiniteTopSpace, c: int, closed: list[int] | None = None) -> bool:
    """Nonempty and not the union of two proper closed subsets."""
    if c == 0:
        return False
    closed = closed if closed is not None else s.closed_sets()
    for c1 in closed:
        if c1 & ~c == 0 and c1 != c:
            if s.closure(c & ~c1) != c:
                return False
    return True


def is_sober(s: FiniteTopSpace) -> tuple[bool, dict | None]:
    t0 = t0_violation(s)
    if t0 is not None:
        return False, {"reason": "not T0", "points": list(t0)}
    closed = s.closed_sets()
    point_closures = {s.closure(1 << x) for x in range(s.n)}
    for c in closed:
        if is_irreducible(s, c, closed) and c not in point_closures:
            return False, {"reason": "irreducible closed set without generic point", "closed": bits(c)}
    return True, None


def join_table(leq: np.ndarray) -> np.ndarray | None:
    """Binary joins of a finite order, or None if some pair has none."""
    n = leq.shape[0]
    out = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            ub = np.flatnonzero(leq[a] & leq[b])
            least = [c for c in ub if leq[c, ub].all()]
            if not least:
                return None
            out[a, b] = least[0]
    return out


def _pointwise_join(j: np.ndarray, v: int, w: int) -> int:
    acc = 0
    for x in bits(v):
        for y in bits(w):
            acc |= 1 << int(j[x, y])
    return acc


def _join_of(j: np.ndarray, bottom: int, pts: Iterable[int]) -> int:
    acc = bottom
    for x in pts:
        acc = int(j[acc, x])
    return acc


def is_sober_lattice(s: FiniteTopSpace) -> tuple[bool, Report]:
    rep = Report("sober lattice", population={"points": s.n, "opens": len(s.opens), "mode": "exhaustive"})
    sober, why = is_sober(s)
    rep.add("sober", sober, why)
    leq = specialization_order(s)
    bottoms = [x for x in range(s.n) if leq[x].all()]
    rep.add("least element", bool(bottoms), {"reason": "no bottom"})
    j = join_table(leq) if sober else None
    if sober:
        rep.add("binary joins", j is not None, {"reason": "some pair has no join"})
    if not (sober and bottoms and j is not None):
        return False, rep

    # v is continuous iff N(x) x N(y) lands inside N(x v y) for every pair
    nbhd = [s.neighbourhood(x) for x in range(s.n)]
    cont_witness = None
    for x in range(s.n):
        for y in range(s.n):
            target = nbhd[int(j[x, y])]
            for x2 in bits(nbhd[x]):
                for y2 in bits(nbhd[y]):
                    if not target >> int(j[x2, y2]) & 1:
                        cont_witness = {"pair": [x, y], "nearby": [x2, y2]}
                        break
                if cont_witness:
                    break
            if cont_witness:
                break
        if cont_witness:
            break
    rep.add("join continuity", cont_witness is None, cont_witness)

    opens = sorted(s.opens)
    bad = next(
        ((v, w) for v in opens for w in opens if v & w != _pointwise_join(j, v, w)),
        None,
    )
    rep.add("open meet is pointwise join", bad is None, None if bad is None else {"V": bits(bad[0]), "W": bits(bad[1])})

    bottom = bottoms[0]
    bad_s = next(
        (sub for sub in range(1 << s.n) if _join_of(j, bottom, bits(sub)) != _join_of(j, bottom, bits(s.closure(sub)))),
        None,
    )
    rep.add("join of a set equals join of its closure", bad_s is None, None if bad_s is None else {"S": bits(bad_s)})
    return rep.ok, rep


# small spaces


def sierpinski() -> FiniteTopSpace:
    return FiniteTopSpace(2, [0, 0b10, 0b11])


def discrete(n: int) -> FiniteTopSpace:
    return FiniteTopSpace(n, range(1 << n))


def indiscrete(n: int) -> FiniteTopSpace:
    return FiniteTopSpace(n, [0, (1 << n) - 1])


def random_lattice_order(rng: random.Random, max_size: int = 8, ground: int = 4) -> np.ndarray:
    """Inclusion order of a random intersection-closed family containing the ground set.

    Such a family is always a lattice (meet = intersection).
    """
    full = (1 << ground) - 1
    while True:
        family = {full}
        for _ in range(rng.randint(0, 6)):
            family.add(rng.randrange(1 << ground))
        changed = True
        while changed:
            changed = False
            for a in list(family):
                for b in list(family):
                    if a & b not in family:
                        family.add(a & b)
                        changed = True
        if len(family) <= max_size:
            break
    members = sorted(family, key=lambda m: (bin(m).count("1"), m))
    perm = list(range(len(members)))
    rng.shuffle(perm)
    members = [members[k] for k in perm]
    k = len(members)
    leq = np.zeros((k, k), dtype=bool)
    for i, a in enumerate(members):
        for t, b in enumerate(members):
            leq[i, t] = a & ~b == 0
    return leq
