"""The convolution *-algebra of a finite groupoid over Q(i).

A function on arrows is a coefficient row indexed by arrow id.  The row
helpers work on raw tuples so the powerspace code can call them in tight
loops; ``GroupoidFunction`` wraps them for everything else.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .groupoid import FiniteGroupoid, GroupoidError
from .linalg import Row, as_row
from .scalars import RANDOM_COEFFICIENTS, ZERO, GaussianRational, Scalarlike, gr


def convolve_rows(g: FiniteGroupoid, a: Row, b: Row) -> Row:
    """``(a * b)(x) = sum over x = yz of a(y) b(z)``."""
    out = [ZERO] * g.n_arrows
    sb = [(z, c) for z, c in enumerate(b) if c]
    comp = g.comp
    for y, cy in enumerate(a):
        if not cy:
            continue
        row = comp[y]
        for z, cz in sb:
            x = row[z]
            if x >= 0:
                out[x] = out[x] + cy * cz
    return tuple(out)


def star_row(g: FiniteGroupoid, a: Row) -> Row:
    """``a*(x) = conj(a(x^-1))``"""
    inv = g.inverse
    return tuple(a[inv[x]].conj() for x in range(g.n_arrows))


def support_mask(a: Row) -> int:
    m = 0
    for k, c in enumerate(a):
        if c:
            m |= 1 << k
    return m


def delta_row(g: FiniteGroupoid, arrow: int, coeff: Scalarlike = 1) -> Row:
    c = gr(coeff)
    return tuple(c if k == arrow else ZERO for k in range(g.n_arrows))


def random_row(g: FiniteGroupoid, rng: random.Random) -> Row:
    return tuple(rng.choice(RANDOM_COEFFICIENTS) for _ in range(g.n_arrows))


@dataclass(frozen=True, eq=False)
class GroupoidFunction:
    groupoid: FiniteGroupoid
    coeffs: tuple

    def __init__(self, groupoid: FiniteGroupoid, coeffs: Sequence[Scalarlike]):
        row = as_row(coeffs)
        if len(row) != groupoid.n_arrows:
            raise GroupoidError(f"need {groupoid.n_arrows} coefficients, got {len(row)}")
        object.__setattr__(self, "groupoid", groupoid)
        object.__setattr__(self, "coeffs", row)

    def _same(self, other: GroupoidFunction) -> None:
        if other.groupoid is not self.groupoid:
            raise GroupoidError("functions live on different groupoids")

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupoidFunction):
            return NotImplemented
        return self.groupoid is other.groupoid and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: GroupoidFunction) -> GroupoidFunction:
        self._same(other)
        return GroupoidFunction(self.groupoid, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: GroupoidFunction) -> GroupoidFunction:
        self._same(other)
        return GroupoidFunction(self.groupoid, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, c: Scalarlike) -> GroupoidFunction:
        c = gr(c)
        return GroupoidFunction(self.groupoid, [c * a for a in self.coeffs])

    def __mul__(self, other: GroupoidFunction) -> GroupoidFunction:
        return convolve(self, other)

    def __getitem__(self, arrow: int) -> GaussianRational:
        return self.coeffs[arrow]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self) -> str:
        g = self.groupoid
        terms = [f"{c}*d{g.name(k)}" for k, c in enumerate(self.coeffs) if c]
        return "GroupoidFunction(" + (" + ".join(terms) or "0") + ")"


def delta(g: FiniteGroupoid, arrow: int | str, coeff: Scalarlike = 1) -> GroupoidFunction:
    idx = g.arrow_index(arrow) if isinstance(arrow, str) else arrow
    return GroupoidFunction(g, delta_row(g, idx, coeff))


def zero_function(g: FiniteGroupoid) -> GroupoidFunction:
    return GroupoidFunction(g, [ZERO] * g.n_arrows)


def random_function(g: FiniteGroupoid, rng: random.Random) -> GroupoidFunction:
    return GroupoidFunction(g, random_row(g, rng))


def convolve(f: GroupoidFunction, h: GroupoidFunction) -> GroupoidFunction:
    f._same(h)
    return GroupoidFunction(f.groupoid, convolve_rows(f.groupoid, f.coeffs, h.coeffs))


def star(f: GroupoidFunction) -> GroupoidFunction:
    return GroupoidFunction(f.groupoid, star_row(f.groupoid, f.coeffs))


def osupp_fn(f: GroupoidFunction) -> int:
    return support_mask(f.coeffs)


def pair_size(g: FiniteGroupoid) -> int | None:
    """``n`` if ``g`` is laid out as pair(n) (arrow ``x*n + y`` from ``y`` to ``x``), else None."""
    n = g.n_objects
    if g.n_arrows != n * n:
        return None
    for a in range(g.n_arrows):
        if g.cod[a] != a // n or g.dom[a] != a % n:
            return None
    return n


def matrix_rep(f: GroupoidFunction) -> list[list[GaussianRational]]:
    """``delta_(x,y) -> E_xy`` for functions on a pair groupoid."""
    g = f.groupoid
    n = pair_size(g)
    if n is None:
        raise GroupoidError("matrix representation needs a pair groupoid")
    return [list(f.coeffs[x * n : (x + 1) * n]) for x in range(n)]


def from_matrix(g: FiniteGroupoid, m: Sequence[Sequence[Scalarlike]]) -> GroupoidFunction:
    n = pair_size(g)
    if n is None:
        raise GroupoidError("matrix representation needs a pair groupoid")
    if len(m) != n or any(len(r) != n for r in m):
        raise GroupoidError(f"need a {n}x{n} matrix")
    return GroupoidFunction(g, [c for r in m for c in r])


def matmul(a: Sequence[Sequence[GaussianRational]], b: Sequence[Sequence[GaussianRational]]):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ZERO
            for t in range(k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def conj_transpose(a: Sequence[Sequence[GaussianRational]]):
    return [[a[i][j].conj() for i in range(len(a))] for j in range(len(a[0]))]
