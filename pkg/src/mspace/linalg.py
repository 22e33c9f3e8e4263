"""Canonical-form linear algebra over Q(i).

Every subspace is stored by its reduced row-echelon basis, so two subspaces
are equal exactly when their stored matrices are equal.  In finite dimension
every subspace is closed, so the closures that appear in ``P v Q`` and in
direct images are identities here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .scalars import ONE, ZERO, GaussianRational, Scalarlike, format_scalar, gr, parse_scalar

Row = tuple  # tuple[GaussianRational, ...]


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Vector:
    coords: tuple

    def __init__(self, coords: Iterable[Scalarlike]):
        object.__setattr__(self, "coords", tuple(gr(c) for c in coords))

    @property
    def ambient_dim(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, k):
        return self.coords[k]

    def support(self) -> tuple[int, ...]:
        return tuple(k for k, c in enumerate(self.coords) if c)


def as_row(v) -> Row:
    if isinstance(v, Vector):
        return v.coords
    if isinstance(v, tuple) and all(isinstance(c, GaussianRational) for c in v):
        return v
    return tuple(gr(c) for c in v)


class _Echelon:
    """Mutable reduced-echelon accumulator; rows are kept sorted by pivot."""

    __slots__ = ("dim", "rows", "pivots")

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[list[GaussianRational]] = []
        self.pivots: list[int] = []

    def reduce(self, v: Sequence[GaussianRational]) -> list[GaussianRational]:
        w = list(v)
        for row, p in zip(self.rows, self.pivots):
            c = w[p]
            if c:
                for k in range(p, self.dim):
                    rk = row[k]
                    if rk:
                        w[k] = w[k] - c * rk
        return w

    def add(self, v: Sequence[GaussianRational]) -> bool:
        """Insert ``v``; returns True when it enlarged the span."""
        if len(self.pivots) == self.dim:
            return False
        w = self.reduce(v)
        p = next((k for k, c in enumerate(w) if c), None)
        if p is None:
            return False
        inv = w[p].inverse()
        if inv != ONE:
            w = [c * inv if c else c for c in w]
        w[p] = ONE
        # clear the new pivot column from the older rows
        for row in self.rows:
            c = row[p]
            if c:
                for k in range(p, self.dim):
                    wk = w[k]
                    if wk:
                        row[k] = row[k] - c * wk
        at = 0
        while at < len(self.pivots) and self.pivots[at] < p:
            at += 1
        self.rows.insert(at, w)
        self.pivots.insert(at, p)
        return True

    def full(self) -> bool:
        return len(self.pivots) == self.dim

    def freeze(self) -> Subspace:
        return Subspace._trusted(self.dim, tuple(tuple(r) for r in self.rows))


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: tuple  # tuple[Row, ...] in reduced row-echelon form

    @classmethod
    def _trusted(cls, dim: int, rows: tuple) -> Subspace:
        s = object.__new__(cls)
        object.__setattr__(s, "ambient_dim", dim)
        object.__setattr__(s, "basis", rows)
        return s

    @classmethod
    def zero(cls, dim: int) -> Subspace:
        return cls._trusted(dim, ())

    @classmethod
    def full(cls, dim: int) -> Subspace:
        return cls._trusted(dim, tuple(unit_row(dim, k) for k in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(k for k, c in enumerate(r) if c) for r in self.basis)

    def contains(self, v) -> bool:
        row = as_row(v)
        _check_dim(self.ambient_dim, len(row))
        acc = [ZERO] * self.ambient_dim
        for r, p in zip(self.basis, self.pivots):
            c = row[p]
            if c:
                for k, rk in enumerate(r):
                    if rk:
                        acc[k] = acc[k] + c * rk
        return tuple(acc) == row

    def support(self) -> frozenset[int]:
        return frozenset(k for r in self.basis for k, c in enumerate(r) if c)

    def __le__(self, other: Subspace) -> bool:
        return subspace_leq(self, other)

    def __or__(self, other: Subspace) -> Subspace:
        return subspace_sum(self, other)

    def __and__(self, other: Subspace) -> Subspace:
        return subspace_intersect(self, other)

    def to_json(self) -> list[list[str]]:
        return subspace_to_json(self)

    def __repr__(self) -> str:
        rows = ", ".join("[" + ", ".join(_short(c) for c in r) + "]" for r in self.basis)
        return f"Subspace(dim={self.ambient_dim}, [{rows}])"


def _short(c: GaussianRational) -> str:
    if c.is_real():
        f = c.re
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return format_scalar(c)


def _check_dim(expected: int, got: int) -> None:
    if expected != got:
        raise DimensionMismatch(f"ambient dimension mismatch: {expected} vs {got}")


def unit_row(dim: int, k: int) -> Row:
    return tuple(ONE if j == k else ZERO for j in range(dim))


def span_canonicalize(vectors: Iterable, ambient_dim: int | None = None) -> Subspace:
    """Canonical basis of the span of ``vectors``.

    ``ambient_dim`` is required when ``vectors`` may be empty.
    """
    rows = [as_row(v) for v in vectors]
    if ambient_dim is None:
        if not rows:
            raise ValueError("ambient_dim is required for an empty family")
        ambient_dim = len(rows[0])
    for r in rows:
        _check_dim(ambient_dim, len(r))
    ech = _Echelon(ambient_dim)
    for r in rows:
        ech.add(r)
        if ech.full():
            break
    return ech.freeze()


def subspace_sum(p: Subspace, q: Subspace) -> Subspace:
    _check_dim(p.ambient_dim, q.ambient_dim)
    if not q.basis:
        return p
    if not p.basis:
        return q
    return span_canonicalize(p.basis + q.basis, p.ambient_dim)


def subspace_intersect(p: Subspace, q: Subspace) -> Subspace:
    """Zassenhaus: echelonize [p | p] and [q | 0]; rows [0 | w] span the meet."""
    _check_dim(p.ambient_dim, q.ambient_dim)
    n = p.ambient_dim
    if not p.basis or not q.basis:
        return Subspace.zero(n)
    zeros = (ZERO,) * n
    ech = _Echelon(2 * n)
    for r in p.basis:
        ech.add(r + r)
    for r in q.basis:
        ech.add(r + zeros)
    meet = [row[n:] for row, piv in zip(ech.rows, ech.pivots) if piv >= n]
    return span_canonicalize(meet, n)


def subspace_leq(p: Subspace, q: Subspace) -> bool:
    _check_dim(p.ambient_dim, q.ambient_dim)
    if p.dim > q.dim:
        return False
    return all(q.contains(r) for r in p.basis)


def apply_matrix(h: Sequence[Sequence], v: Sequence[GaussianRational]) -> Row:
    """``h @ v`` with ``h`` given row-major as codomain_dim x domain_dim."""
    if any(len(hr) != len(v) for hr in h):
        raise DimensionMismatch("matrix does not act on this ambient space")
    out = []
    for hr in h:
        acc = ZERO
        for a, b in zip(hr, v):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return tuple(out)


def image(h: Sequence[Sequence], p: Subspace) -> Subspace:
    """Direct image of a subspace under a linear map (the closure is trivial here)."""
    hm = [tuple(gr(c) for c in r) for r in h]
    if hm and len(hm[0]) != p.ambient_dim:
        raise DimensionMismatch(f"map expects dimension {len(hm[0])}, subspace has {p.ambient_dim}")
    return span_canonicalize([apply_matrix(hm, r) for r in p.basis], len(hm))


# serialization: row-major list of "a/b+c/d*i" strings


def subspace_to_json(s: Subspace) -> list[list[str]]:
    return [[format_scalar(c) for c in r] for r in s.basis]


def subspace_from_json(rows: list[list[str]], ambient_dim: int) -> Subspace:
    return span_canonicalize([[parse_scalar(c) for c in r] for r in rows], ambient_dim)
