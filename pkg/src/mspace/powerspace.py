"""Finitely presented elements of Max A for A the convolution algebra of a finite groupoid.

An element is stored as a spanning family ("generators"); the canonical
echelon basis is computed only when something needs it (equality, order,
meets).  The open support of a subspace is the union of the supports of any
spanning family, so retractions never need the canonical form.

Matrix algebras M_n are handled as the convolution algebra of pair(n), with
coordinate ``x*n + y`` holding the matrix entry ``(x, y)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import GroupoidFunction, convolve_rows, matrix_rep, pair_size, star_row, support_mask
from .groupoid import FiniteGroupoid, GroupoidError, disjoint_union, pair_groupoid
from .linalg import Subspace, as_row, image, span_canonicalize, subspace_intersect, subspace_to_json, unit_row
from .scalars import ONE, RANDOM_COEFFICIENTS, ZERO, Scalarlike, gr
from .space import bits


class PowerspaceElement:
    __slots__ = ("algebra", "_gens", "_sub", "_osupp")

    def __init__(self, algebra: FiniteGroupoid, gens: Iterable = (), subspace: Subspace | None = None):
        self.algebra = algebra
        n = algebra.n_arrows
        if subspace is not None:
            if subspace.ambient_dim != n:
                raise GroupoidError(f"subspace has dimension {subspace.ambient_dim}, algebra has {n}")
            self._gens = subspace.basis
        else:
            rows = []
            for v in gens:
                r = as_row(v)
                if len(r) != n:
                    raise GroupoidError(f"vector has {len(r)} coordinates, algebra has {n}")
                if any(r):
                    rows.append(r)
            self._gens = tuple(rows)
        self._sub = subspace
        self._osupp = None

    @property
    def ambient_dim(self) -> int:
        return self.algebra.n_arrows

    @property
    def subspace(self) -> Subspace:
        if self._sub is None:
            self._sub = span_canonicalize(self._gens, self.ambient_dim)
            self._gens = self._sub.basis
        return self._sub

    @property
    def gens(self) -> tuple:
        return self._gens

    def small_gens(self) -> tuple:
        """A spanning family no longer than the dimension of the ambient space."""
        if len(self._gens) > self.ambient_dim:
            return self.subspace.basis
        return self._gens

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def osupp(self) -> int:
        if self._osupp is None:
            m = 0
            for r in self._gens:
                m |= support_mask(r)
            self._osupp = m
        return self._osupp

    def key(self) -> tuple:
        return self.subspace.basis

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerspaceElement):
            return NotImplemented
        return self.algebra is other.algebra and self.subspace == other.subspace

    def __hash__(self) -> int:
        return hash(self.key())

    def __le__(self, other: PowerspaceElement) -> bool:
        return max_leq(self, other)

    def __or__(self, other: PowerspaceElement) -> PowerspaceElement:
        return max_join(self, other)

    def __and__(self, other: PowerspaceElement) -> PowerspaceElement:
        return max_meet(self, other)

    def __mul__(self, other: PowerspaceElement) -> PowerspaceElement:
        return max_product(self, other)

    def to_json(self) -> list[list[str]]:
        return subspace_to_json(self.subspace)

    def __repr__(self) -> str:
        return f"PowerspaceElement({self.subspace!r})"


def _same(p: PowerspaceElement, q: PowerspaceElement) -> None:
    if p.algebra is not q.algebra:
        raise GroupoidError("elements live over different algebras")


def span(g: FiniteGroupoid, vectors: Iterable) -> PowerspaceElement:
    return PowerspaceElement(g, vectors)


def canonical(g: FiniteGroupoid, vectors: Iterable) -> PowerspaceElement:
    return PowerspaceElement(g, subspace=span_canonicalize(vectors, g.n_arrows))


def max_zero(g: FiniteGroupoid) -> PowerspaceElement:
    return PowerspaceElement(g, subspace=Subspace.zero(g.n_arrows))


def max_top(g: FiniteGroupoid) -> PowerspaceElement:
    return PowerspaceElement(g, subspace=Subspace.full(g.n_arrows))


def iota_Cc(g: FiniteGroupoid, u: int) -> PowerspaceElement:
    """Span of the deltas on the arrows of ``u``; already in echelon form."""
    if u & ~g.full:
        raise GroupoidError("arrow set is not a subset of the arrows")
    n = g.n_arrows
    return PowerspaceElement(g, subspace=Subspace._trusted(n, tuple(unit_row(n, k) for k in bits(u))))


def max_base(g: FiniteGroupoid) -> PowerspaceElement:
    """Functions supported on the units: the diagonal algebra, a projection but not the unit."""
    return iota_Cc(g, g.unit_mask)


def max_one(g: FiniteGroupoid) -> PowerspaceElement:
    """``<1>``, the span of the algebra unit; this is the unit of the product on subspaces."""
    n = g.n_arrows
    return PowerspaceElement(g, [tuple(ONE if g.unit_mask >> k & 1 else ZERO for k in range(n))])


def max_join(p: PowerspaceElement, q: PowerspaceElement) -> PowerspaceElement:
    _same(p, q)
    if not q.gens:
        return p
    if not p.gens:
        return q
    return PowerspaceElement(p.algebra, p.gens + q.gens)


def max_meet(p: PowerspaceElement, q: PowerspaceElement) -> PowerspaceElement:
    _same(p, q)
    return PowerspaceElement(p.algebra, subspace=subspace_intersect(p.subspace, q.subspace))


def max_leq(p: PowerspaceElement, q: PowerspaceElement) -> bool:
    _same(p, q)
    if p.osupp() & ~q.osupp():
        return False
    target = q.subspace
    return all(target.contains(r) for r in p.small_gens())


def max_product(p: PowerspaceElement, q: PowerspaceElement) -> PowerspaceElement:
    """Span of the products of spanning vectors (bilinearity makes that the whole product)."""
    _same(p, q)
    g = p.algebra
    out = []
    for a in p.small_gens():
        for b in q.small_gens():
            c = convolve_rows(g, a, b)
            if any(c):
                out.append(c)
    return PowerspaceElement(g, out)


def max_involute(p: PowerspaceElement) -> PowerspaceElement:
    g = p.algebra
    return PowerspaceElement(g, [star_row(g, r) for r in p.gens])


def osupp_subspace(v: PowerspaceElement) -> int:
    return v.osupp()


@dataclass(frozen=True)
class StablyGelfandCheck:
    triple: PowerspaceElement  # P P* P
    triple_below: bool  # P P* P <= P
    above_triple: bool  # P <= P P* P

    @property
    def violated(self) -> bool:
        return self.triple_below and not self.above_triple


def stably_gelfand_element(p: PowerspaceElement) -> StablyGelfandCheck:
    t = max_product(max_product(p, max_involute(p)), p)
    return StablyGelfandCheck(t, max_leq(t, p), max_leq(p, t))


def pushforward_subspace(h: Sequence[Sequence[Scalarlike]], p: PowerspaceElement, target: FiniteGroupoid | None = None) -> PowerspaceElement:
    """Image of ``p`` under the linear map with matrix ``h`` (rows index the codomain)."""
    target = target or p.algebra
    if len(h) != target.n_arrows:
        raise GroupoidError(f"map has {len(h)} output coordinates, target algebra has {target.n_arrows}")
    return PowerspaceElement(target, subspace=image(h, p.subspace))


def transpose_map(n: int) -> list[list[int]]:
    """Matrix of ``A -> A^T`` on M_n in row-major coordinates."""
    size = n * n
    h = [[0] * size for _ in range(size)]
    for x in range(n):
        for y in range(n):
            h[y * n + x][x * n + y] = 1
    return h


def random_element(g: FiniteGroupoid, rng: random.Random) -> PowerspaceElement:
    """Span of ``k`` random vectors with ``k`` uniform in ``[0, |G1|]``."""
    n = g.n_arrows
    k = rng.randint(0, n)
    return PowerspaceElement(g, [tuple(rng.choice(RANDOM_COEFFICIENTS) for _ in range(n)) for _ in range(k)])


# matrix presentations


def matrix_algebra(n: int) -> FiniteGroupoid:
    return pair_groupoid(n)


def from_matrices(g: FiniteGroupoid, mats: Iterable[Sequence[Sequence[Scalarlike]]]) -> PowerspaceElement:
    n = pair_size(g)
    if n is None:
        raise GroupoidError("matrix presentation needs a pair groupoid")
    rows = []
    for m in mats:
        if len(m) != n or any(len(r) != n for r in m):
            raise GroupoidError(f"need {n}x{n} matrices")
        rows.append(tuple(gr(c) for r in m for c in r))
    return PowerspaceElement(g, rows)


_M2 = None
_C2 = None


def m2() -> FiniteGroupoid:
    global _M2
    if _M2 is None:
        _M2 = pair_groupoid(2)
    return _M2


def c2() -> FiniteGroupoid:
    """The commutative algebra C^2 as functions on two unit arrows."""
    global _C2
    if _C2 is None:
        _C2 = disjoint_union(pair_groupoid(1), pair_groupoid(1))
    return _C2


def spin_library() -> dict[str, PowerspaceElement]:
    """Spin measurements in Max M_2 as spans of projections."""
    g = m2()
    lib = {
        "z_up": from_matrices(g, [[[1, 0], [0, 0]]]),
        "z_down": from_matrices(g, [[[0, 0], [0, 1]]]),
        "x_up": from_matrices(g, [[[1, 1], [1, 1]]]),
        "x_down": from_matrices(g, [[[1, -1], [-1, 1]]]),
        "z": from_matrices(g, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]),  # D_2
        "x": from_matrices(g, [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]),  # <1, sigma_x>
    }
    return {k: PowerspaceElement(g, subspace=v.subspace) for k, v in lib.items()}


def spin_library_c2() -> dict[str, PowerspaceElement]:
    """The same measurements in the Hilbert-space picture, as subspaces of C^2."""
    g = c2()
    lib = {
        "z_up": span(g, [(1, 0)]),
        "z_down": span(g, [(0, 1)]),
        "x_up": span(g, [(1, 1)]),
        "x_down": span(g, [(1, -1)]),
    }
    lib["z"] = max_join(lib["z_up"], lib["z_down"])
    lib["x"] = max_join(lib["x_up"], lib["x_down"])
    return {k: PowerspaceElement(g, subspace=v.subspace) for k, v in lib.items()}


def zero_pattern_retraction(v: PowerspaceElement) -> PowerspaceElement:
    """Span of the matrix units ``E_xy`` at every entry where some member of ``v`` is nonzero.

    Works entrywise on the matrix pictures of the generators.
    """
    g = v.algebra
    n = pair_size(g)
    if n is None:
        raise GroupoidError("zero-pattern retraction needs a matrix algebra")
    pattern = [[False] * n for _ in range(n)]
    for r in v.gens:
        m = matrix_rep(GroupoidFunction(g, r))
        for x in range(n):
            for y in range(n):
                pattern[x][y] = pattern[x][y] or bool(m[x][y])
    units = [[[1 if (i, j) == (x, y) else 0 for j in range(n)] for i in range(n)] for x in range(n) for y in range(n) if pattern[x][y]]
    return from_matrices(g, units)
