"""Finite discrete groupoids and their arrow-set quantales.

Arrows are numbered ``0..N-1`` in construction order and a set of arrows is
an int bitmask.  Composition ``gh`` is defined exactly when ``d(g) = r(h)``.

With the discrete topology every structure map is continuous and open, the
unit space is open (so the groupoid is etale), and a dense set of objects
with trivial isotropy must be all of them: topologically principal and
principal coincide.  Orbits are finite, hence discrete.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from .quantale import MAX_ELEMENTS, FiniteInvolutiveQuantale, StructureError, mask_label, powerset_quantale
from .report import Report
from .space import bits


class GroupoidError(ValueError):
    pass


class FiniteGroupoid:
    def __init__(
        self,
        n_objects: int,
        dom: Sequence[int],
        cod: Sequence[int],
        compose,
        inverse: Sequence[int],
        unit_of: Sequence[int],
        names: Sequence[str] | None = None,
        kind: str = "explicit",
    ):
        n = len(dom)
        if len(cod) != n or len(inverse) != n:
            raise GroupoidError("dom, cod and inverse must have one entry per arrow")
        if len(unit_of) != n_objects:
            raise GroupoidError("unit_of must have one entry per object")
        comp = np.asarray(compose, dtype=np.int64).reshape(n, n) if n else np.zeros((0, 0), dtype=np.int64)
        for seq, bound, what in ((dom, n_objects, "dom"), (cod, n_objects, "cod"), (inverse, n, "inverse"), (unit_of, n, "unit_of")):
            if any(not 0 <= int(v) < bound for v in seq):
                raise GroupoidError(f"{what} has an entry out of range")
        if n and ((comp < -1) | (comp >= n)).any():
            raise GroupoidError("compose has an entry out of range")
        self.n_objects = n_objects
        self.dom = tuple(int(v) for v in dom)
        self.cod = tuple(int(v) for v in cod)
        self.comp = comp
        self.inverse = tuple(int(v) for v in inverse)
        self.unit_of = tuple(int(v) for v in unit_of)
        self.names = tuple(names) if names is not None else tuple(str(k) for k in range(n))
        self.kind = kind

    @property
    def n_arrows(self) -> int:
        return len(self.dom)

    @property
    def full(self) -> int:
        return (1 << self.n_arrows) - 1

    @property
    def unit_mask(self) -> int:
        m = 0
        for u in self.unit_of:
            m |= 1 << u
        return m

    def d(self, g: int) -> int:
        return self.dom[g]

    def r(self, g: int) -> int:
        return self.cod[g]

    def mul(self, g: int, h: int) -> int | None:
        v = int(self.comp[g, h])
        return None if v < 0 else v

    def name(self, g: int) -> str:
        return self.names[g]

    def arrow_index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise GroupoidError(f"no arrow named {name!r}") from None

    def set_names(self, mask: int) -> list[str]:
        return [self.names[k] for k in bits(mask)]

    def set_from_names(self, names: Iterable[str]) -> int:
        m = 0
        for nm in names:
            m |= 1 << self.arrow_index(nm)
        return m

    # arrow-set algebra

    def product(self, u: int, v: int) -> int:
        out = 0
        vb = bits(v)
        for a in bits(u):
            row = self.comp[a]
            for b in vb:
                c = row[b]
                if c >= 0:
                    out |= 1 << int(c)
        return out

    def invert(self, u: int) -> int:
        out = 0
        for a in bits(u):
            out |= 1 << self.inverse[a]
        return out

    def d_image(self, u: int) -> int:
        return sum({1 << self.dom[a] for a in bits(u)})

    def r_image(self, u: int) -> int:
        return sum({1 << self.cod[a] for a in bits(u)})

    def to_json(self) -> dict:
        compose = [[g, h, int(self.comp[g, h])] for g in range(self.n_arrows) for h in range(self.n_arrows) if self.comp[g, h] >= 0]
        return {
            "objects": self.n_objects,
            "arrows": [{"dom": self.dom[g], "cod": self.cod[g], "name": self.names[g]} for g in range(self.n_arrows)],
            "compose": compose,
            "inverse": list(self.inverse),
        }

    def __repr__(self) -> str:
        return f"FiniteGroupoid({self.kind}, objects={self.n_objects}, arrows={self.n_arrows})"


def arrowset_algebra(g: FiniteGroupoid, op: str, *args: int) -> int:
    if any(a & ~g.full for a in args):
        raise GroupoidError("arrow set is not a subset of the arrows")
    if op == "product":
        u, v = args
        return g.product(u, v)
    if op == "inverse":
        (u,) = args
        return g.invert(u)
    if op == "unit":
        return g.unit_mask
    raise GroupoidError(f"unknown arrow-set operation {op!r}")


# constructors


def pair_groupoid(n: int) -> FiniteGroupoid:
    """Arrow ``(x, y)`` has id ``x*n + y``, ``d = y``, ``r = x`` and ``(x,y)(y,z) = (x,z)``."""
    if n < 1:
        raise GroupoidError("pair groupoid needs at least one object")
    N = n * n
    comp = -np.ones((N, N), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            for z in range(n):
                comp[x * n + y, y * n + z] = x * n + z
    dom = [a % n for a in range(N)]
    cod = [a // n for a in range(N)]
    inverse = [(a % n) * n + a // n for a in range(N)]
    names = [f"({x + 1},{y + 1})" for x in range(n) for y in range(n)]
    return FiniteGroupoid(n, dom, cod, comp, inverse, [x * n + x for x in range(n)], names, f"pair({n})")


def check_group_table(table) -> tuple[int, list[int]]:
    """Identity and inverses of a group table, or a GroupoidError naming the failed axiom."""
    t = np.asarray(table, dtype=np.int64)
    k = t.shape[0]
    if t.shape != (k, k) or k == 0:
        raise GroupoidError("group table must be a nonempty square table")
    if ((t < 0) | (t >= k)).any():
        raise GroupoidError("group table has an entry out of range")
    for a in range(k):
        bad = np.argwhere(t[t[a]] != t[a][t])
        if len(bad):
            b, c = map(int, bad[0])
            raise GroupoidError(f"group table is not associative at {(a, b, c)}")
    ids = [e for e in range(k) if (t[e] == np.arange(k)).all() and (t[:, e] == np.arange(k)).all()]
    if not ids:
        raise GroupoidError("group table has no identity")
    e = ids[0]
    inv = []
    for a in range(k):
        cands = np.flatnonzero((t[a] == e) & (t[:, a] == e))
        if not len(cands):
            raise GroupoidError(f"element {a} has no inverse")
        inv.append(int(cands[0]))
    return e, inv


def group_groupoid(table, names: Sequence[str] | None = None, label: str = "group") -> FiniteGroupoid:
    t = np.asarray(table, dtype=np.int64)
    e, inv = check_group_table(t)
    k = t.shape[0]
    return FiniteGroupoid(1, [0] * k, [0] * k, t, inv, [e], names, label)


def cyclic_table(k: int) -> np.ndarray:
    idx = np.arange(k)
    return (idx[:, None] + idx[None, :]) % k


def symmetric_table(n: int) -> tuple[np.ndarray, list[str]]:
    perms = list(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    k = len(perms)
    t = np.zeros((k, k), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            t[i, j] = index[tuple(p[q[x]] for x in range(n))]
    return t, ["".join(str(v + 1) for v in p) for p in perms]


def named_group(name: str) -> tuple[np.ndarray, list[str]]:
    """``Zk`` (cyclic) or ``Sn`` (symmetric, n <= 4)."""
    m = re.fullmatch(r"([ZS])(\d+)", name.strip())
    if not m:
        raise GroupoidError(f"unknown group {name!r}; use Zk or Sn")
    kind, k = m.group(1), int(m.group(2))
    if kind == "Z":
        if k < 1:
            raise GroupoidError("Zk needs k >= 1")
        names = ["e", "g"] if k == 2 else ["e"] + [f"g{j}" for j in range(1, k)]
        return cyclic_table(k), names
    if not 1 <= k <= 4:
        raise GroupoidError("Sn is supported for 1 <= n <= 4")
    return symmetric_table(k)


def action_groupoid(table, n_points: int, act, group_names: Sequence[str] | None = None, label: str = "action") -> FiniteGroupoid:
    """Arrow ``(a, x)`` has id ``a*n_points + x``, ``d = x``, ``r = a.x``; ``(a, b.x)(b, x) = (ab, x)``."""
    t = np.asarray(table, dtype=np.int64)
    e, ginv = check_group_table(t)
    k = t.shape[0]
    act = np.asarray(act, dtype=np.int64)
    if act.shape != (k, n_points) or ((act < 0) | (act >= n_points)).any():
        raise GroupoidError("action table must be |group| x |points| with entries in range")
    if (act[e] != np.arange(n_points)).any():
        raise GroupoidError("action axiom e.x = x fails")
    for a in range(k):
        for b in range(k):
            bad = np.flatnonzero(act[t[a, b]] != act[a][act[b]])
            if len(bad):
                raise GroupoidError(f"action axiom (ab).x = a.(b.x) fails at {(a, b, int(bad[0]))}")
    N = k * n_points
    comp = -np.ones((N, N), dtype=np.int64)
    for a in range(k):
        for b in range(k):
            for x in range(n_points):
                comp[a * n_points + int(act[b, x]), b * n_points + x] = int(t[a, b]) * n_points + x
    dom = [g % n_points for g in range(N)]
    cod = [int(act[g // n_points, g % n_points]) for g in range(N)]
    inverse = [ginv[g // n_points] * n_points + int(act[g // n_points, g % n_points]) for g in range(N)]
    gn = group_names or [str(a) for a in range(k)]
    names = [f"({gn[g // n_points]},{g % n_points})" for g in range(N)]
    return FiniteGroupoid(n_points, dom, cod, comp, inverse, [e * n_points + x for x in range(n_points)], names, label)


def regular_action_groupoid(name: str) -> FiniteGroupoid:
    """A group acting on itself by left translation (``Z2`` on {0,1} is the swap)."""
    t, names = named_group(name)
    return action_groupoid(t, t.shape[0], t, names, f"{name}~{name}")


def disjoint_union(g1: FiniteGroupoid, g2: FiniteGroupoid) -> FiniteGroupoid:
    n1, m1 = g1.n_arrows, g1.n_objects
    N = n1 + g2.n_arrows
    comp = -np.ones((N, N), dtype=np.int64)
    comp[:n1, :n1] = g1.comp
    sub = g2.comp.copy()
    sub[sub >= 0] += n1
    comp[n1:, n1:] = sub
    dom = list(g1.dom) + [v + m1 for v in g2.dom]
    cod = list(g1.cod) + [v + m1 for v in g2.cod]
    inverse = list(g1.inverse) + [v + n1 for v in g2.inverse]
    units = list(g1.unit_of) + [v + n1 for v in g2.unit_of]
    names = [f"{nm}.0" for nm in g1.names] + [f"{nm}.1" for nm in g2.names]
    return FiniteGroupoid(m1 + g2.n_objects, dom, cod, comp, inverse, units, names, f"{g1.kind}+{g2.kind}")


def explicit_groupoid(data: dict) -> FiniteGroupoid:
    """From ``{"objects", "arrows": [{"dom", "cod"}], "compose": [[g, h, gh]], "inverse"}``.

    Units are the arrows ``u`` with ``d(u) = r(u) = x`` and ``uu = u``.
    """
    try:
        n_obj = int(data["objects"])
        arrows = data["arrows"]
        dom = [int(a["dom"]) for a in arrows]
        cod = [int(a["cod"]) for a in arrows]
        triples = [tuple(map(int, t)) for t in data["compose"]]
        inverse = [int(v) for v in data["inverse"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise GroupoidError(f"groupoid JSON is malformed: {exc}") from None
    n = len(arrows)
    comp = -np.ones((n, n), dtype=np.int64)
    for t in triples:
        if len(t) != 3 or not all(0 <= v < n for v in t):
            raise GroupoidError(f"bad composition entry {list(t)}")
        comp[t[0], t[1]] = t[2]
    units = []
    for x in range(n_obj):
        cands = [u for u in range(n) if dom[u] == x and cod[u] == x and comp[u, u] == u]
        if not cands:
            raise GroupoidError(f"object {x} has no identity arrow")
        units.append(cands[0])
    names = [a.get("name", str(k)) for k, a in enumerate(arrows)]
    return FiniteGroupoid(n_obj, dom, cod, comp, inverse, units, names)


def construct_groupoid(data: dict | str) -> FiniteGroupoid:
    """Dispatch on the shape of ``data``.

    ``{"pair": n}``, ``{"group": table}`` or ``{"group": "Z3"}``,
    ``{"action": {"group": table, "points": n, "act": table}}``, a spec string
    such as ``"pair(2)+pair(1)"``, or explicit tables as in ``explicit_groupoid``.
    """
    if isinstance(data, str):
        return parse_groupoid_spec(data)
    if not isinstance(data, dict):
        raise GroupoidError("groupoid description must be an object or a spec string")
    if "pair" in data:
        return pair_groupoid(int(data["pair"]))
    if "group" in data:
        grp = data["group"]
        if isinstance(grp, str):
            t, names = named_group(grp)
            return group_groupoid(t, names, grp)
        return group_groupoid(grp, data.get("names"))
    if "action" in data:
        a = data["action"]
        try:
            return action_groupoid(a["group"], int(a["points"]), a["act"], a.get("names"))
        except (KeyError, TypeError) as exc:
            raise GroupoidError(f"action description is malformed: {exc}") from None
    if "spec" in data:
        return parse_groupoid_spec(data["spec"])
    return explicit_groupoid(data)


def load_groupoid(path: str) -> FiniteGroupoid:
    with open(path, encoding="utf-8") as fh:
        return construct_groupoid(json.load(fh))


_TERM = re.compile(r"\s*(pair|group|action)\(\s*([A-Za-z0-9]+)\s*\)\s*")


def parse_groupoid_spec(spec: str) -> FiniteGroupoid:
    """Terms ``pair(n)``, ``group(Zk)``, ``action(Zk)`` joined by ``+`` (disjoint union)."""
    result = None
    for term in spec.split("+"):
        m = _TERM.fullmatch(term)
        if not m:
            raise GroupoidError(f"cannot parse groupoid term {term.strip()!r}")
        kind, arg = m.groups()
        if kind == "pair":
            if not arg.isdigit():
                raise GroupoidError("pair(n) needs an integer")
            g = pair_groupoid(int(arg))
        elif kind == "group":
            t, names = named_group(arg)
            g = group_groupoid(t, names, arg)
        else:
            g = regular_action_groupoid(arg)
        result = g if result is None else disjoint_union(result, g)
    if result is None:
        raise GroupoidError("empty groupoid spec")
    return result


# checks


def verify_groupoid_axioms(g: FiniteGroupoid) -> Report:
    rep = Report("groupoid", population={"arrows": g.n_arrows, "objects": g.n_objects, "mode": "exhaustive"})
    N = g.n_arrows
    nm = g.name

    w = next((x for x in range(g.n_objects) if g.dom[g.unit_of[x]] != x or g.cod[g.unit_of[x]] != x), None)
    rep.add("units: d(u(x)) = x = r(u(x))", w is None, {"object": w})

    w = None
    for a in range(N):
        for b in range(N):
            c = int(g.comp[a, b])
            defined = c >= 0
            if defined != (g.dom[a] == g.cod[b]) or (defined and (g.dom[c] != g.dom[b] or g.cod[c] != g.cod[a])):
                w = {"g": nm(a), "h": nm(b), "gh": nm(c) if defined else None}
                break
        if w:
            break
    rep.add("composition: gh defined iff d(g) = r(h), d(gh) = d(h), r(gh) = r(g)", w is None, w)

    w = None
    for a in range(N):
        for b in range(N):
            ab = int(g.comp[a, b])
            if ab < 0:
                continue
            for c in range(N):
                bc = int(g.comp[b, c])
                if bc < 0:
                    continue
                left, right = int(g.comp[ab, c]), int(g.comp[a, bc])
                if left != right:
                    w = {"g": nm(a), "h": nm(b), "k": nm(c)}
                    break
            if w:
                break
        if w:
            break
    rep.add("associativity: g(hk) = (gh)k", w is None, w)

    w = next(
        (nm(a) for a in range(N) if g.comp[g.unit_of[g.cod[a]], a] != a or g.comp[a, g.unit_of[g.dom[a]]] != a),
        None,
    )
    rep.add("unit laws: u(r(g))g = g = gu(d(g))", w is None, {"g": w})

    w = next(
        (
            nm(a)
            for a in range(N)
            if g.comp[g.inverse[a], a] != g.unit_of[g.dom[a]] or g.comp[a, g.inverse[a]] != g.unit_of[g.cod[a]]
        ),
        None,
    )
    rep.add("inverse laws: g^-1 g = d(g), g g^-1 = r(g)", w is None, {"g": w})
    return rep


@dataclass(frozen=True)
class StructureReport:
    principal: bool
    topologically_principal: bool
    isotropy: tuple  # per object, tuple of arrow ids
    orbits: tuple  # tuple of tuples of objects
    etale: bool = True
    discrete_orbits: bool = True

    def to_json(self, g: FiniteGroupoid | None = None) -> dict:
        name = g.name if g else str
        return {
            "principal": self.principal,
            "topologically_principal": self.topologically_principal,
            "etale": self.etale,
            "discrete_orbits": self.discrete_orbits,
            "isotropy": [[name(a) for a in iso] for iso in self.isotropy],
            "orbits": [list(o) for o in self.orbits],
        }


def structure_report(g: FiniteGroupoid) -> StructureReport:
    isotropy = tuple(
        tuple(a for a in range(g.n_arrows) if g.dom[a] == x and g.cod[a] == x) for x in range(g.n_objects)
    )
    pairs = {(g.dom[a], g.cod[a]) for a in range(g.n_arrows)}
    principal = len(pairs) == g.n_arrows
    parent = list(range(g.n_objects))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(g.n_arrows):
        ra, rb = find(g.dom[a]), find(g.cod[a])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for x in range(g.n_objects):
        groups.setdefault(find(x), []).append(x)
    orbits = tuple(tuple(v) for _, v in sorted(groups.items()))
    return StructureReport(principal, principal, isotropy, orbits)


def local_bisections(g: FiniteGroupoid) -> tuple[int, ...]:
    """All arrow sets on which ``d`` and ``r`` are injective, in increasing bitmask order."""
    out: list[int] = []
    N = g.n_arrows

    def extend(k: int, mask: int, used_d: int, used_r: int) -> None:
        if k == N:
            out.append(mask)
            return
        extend(k + 1, mask, used_d, used_r)
        bd, br = 1 << g.dom[k], 1 << g.cod[k]
        if not used_d & bd and not used_r & br:
            extend(k + 1, mask | (1 << k), used_d | bd, used_r | br)

    extend(0, 0, 0, 0)
    return tuple(sorted(out))


def is_bisection(g: FiniteGroupoid, u: int) -> bool:
    units = g.unit_mask
    return g.product(u, g.invert(u)) & ~units == 0 and g.product(g.invert(u), u) & ~units == 0


def quantale_of_groupoid(g: FiniteGroupoid, threshold: int = MAX_ELEMENTS) -> FiniteInvolutiveQuantale:
    """All arrow sets under inclusion; the arrow set with bitmask ``U`` is element ``U``."""
    size = 1 << g.n_arrows
    if size > min(threshold, MAX_ELEMENTS):
        raise StructureError(
            f"quantale of {g.kind} needs 2^{g.n_arrows} = {size} elements, above the threshold "
            f"{min(threshold, MAX_ELEMENTS)}; arrow-set operations remain available lazily"
        )
    labels = [mask_label(u, g.names) for u in range(size)]
    return powerset_quantale(g.n_arrows, g.mul, lambda a: g.inverse[a], g.unit_mask, labels)
