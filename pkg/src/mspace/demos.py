"""Worked examples: Stern-Gerlach spin, selective measurements, two slits."""

from __future__ import annotations

from .algebra import convolve_rows, delta_row, support_mask
from .groupoid import GroupoidError, pair_groupoid, verify_groupoid_axioms
from .linalg import subspace_to_json
from .powerspace import iota_Cc, max_join, max_meet, max_one, max_product, max_zero, span, spin_library, spin_library_c2
from .quantale import boolean_algebra, direct_sum, mask_label, two
from .report import Report
from .scalars import ONE, ZERO

DEMOS = ("spin", "schwinger", "twoslit")


def _show(p) -> list[list[str]]:
    return subspace_to_json(p.subspace)


def spin_demo() -> Report:
    rep = Report("demo spin", population={"mode": "exhaustive"})
    m = spin_library()
    c = spin_library_c2()
    z = max_join(m["z_up"], m["z_down"])
    rep.add("z = z_up v z_down = D2", z == m["z"], {"z_up v z_down": _show(z), "D2": _show(m["z"])})
    meet = max_meet(m["z_down"], m["z_up"])
    rep.add("z_down ^ z_up = 0", meet == max_zero(m["z"].algebra), {"z_down ^ z_up": _show(meet)})
    prod = max_product(m["z"], m["z_up"])
    rep.add("z z_up = z_up", prod == m["z_up"], {"z z_up": _show(prod)})
    rep.add("x != z in Max M2", m["x"] != m["z"], {"x": _show(m["x"]), "z": _show(m["z"])})
    rep.add("x = z in Max C2", c["x"] == c["z"], {"x": _show(c["x"]), "z": _show(c["z"])})
    return rep


def schwinger_demo(n: int) -> Report:
    """M(a', a) is the arrow (a', a) of pair(n), i.e. the matrix unit E_{a'a}."""
    if n < 2:
        raise GroupoidError("schwinger demo needs at least two values")
    g = pair_groupoid(n)
    rep = Report(f"demo schwinger {n}", population={"mode": "exhaustive", "values": n})
    rep.extend(verify_groupoid_axioms(g), prefix="pair groupoid: ")

    def M(a2: int, a1: int) -> int:
        return a2 * n + a1

    rows = [delta_row(g, k) for k in range(g.n_arrows)]
    bad = None
    for a2 in range(n):
        for a1 in range(n):
            for a in range(n):
                if convolve_rows(g, rows[M(a2, a1)], rows[M(a1, a)]) != rows[M(a2, a)]:
                    bad = bad or {"a''": a2 + 1, "a'": a1 + 1, "a": a + 1}
    rep.add("composition law M(a'',a')M(a',a) = M(a'',a)", bad is None, bad, {"tested": n**3})

    bad = None
    zero = tuple([ZERO] * g.n_arrows)
    for a3 in range(n):
        for a2 in range(n):
            for a1 in range(n):
                if a1 == a2:
                    continue
                for a in range(n):
                    if convolve_rows(g, rows[M(a3, a2)], rows[M(a1, a)]) != zero:
                        bad = bad or {"a'''": a3 + 1, "a''": a2 + 1, "a'": a1 + 1, "a": a + 1}
    rep.add("M(a''',a'')M(a',a) = 0 for a'' != a'", bad is None, bad, {"tested": n**3 * (n - 1)})

    total = [ZERO] * g.n_arrows
    for a in range(n):
        total[M(a, a)] = ONE
    unit_ok = all(convolve_rows(g, total, r) == r == convolve_rows(g, r, total) for r in rows)
    rep.add("sum of M(a) is the unit", unit_ok and support_mask(total) == g.unit_mask)

    joined = max_zero(g)
    for a in range(n):
        joined = max_join(joined, iota_Cc(g, 1 << M(a, a)))
    diagonal = iota_Cc(g, g.unit_mask)
    one = max_one(g)
    rep.add(
        "join of <M(a)> is the diagonal algebra, not <1>",
        joined == diagonal and joined != one and one <= joined,
        {"join": _show(joined), "<1>": _show(one)},
        {"dim join": joined.dim, "dim <1>": one.dim},
    )
    # <1> is the multiplicative unit of Max A; the diagonal algebra splits the all-ones matrix
    ones = span(g, [[ONE] * g.n_arrows])
    rep.add(
        "<1> is the unit of Max A, the diagonal algebra is not",
        max_product(one, ones) == ones == max_product(ones, one) and max_product(diagonal, ones) != ones,
        {"diagonal * <J>": _show(max_product(diagonal, ones))},
    )
    return rep


def twoslit_demo(k: int) -> Report:
    """The slit lattice 2 x 2 with slit1 = (1,0), slit2 = (0,1), times the bin powerset."""
    if k < 1:
        raise GroupoidError("twoslit demo needs at least one target bin")
    slits = direct_sum(two(), two())
    bins = boolean_algebra(k)
    s = direct_sum(slits, bins)
    nb = bins.n
    slit1, slit2, one = 1 * 2 + 0, 0 * 2 + 1, slits.top
    rep = Report(f"demo twoslit {k}", population={"mode": "exhaustive", "bin sets": nb})
    rep.add("slit1 v slit2 = 1", int(slits.join[slit1, slit2]) == one)
    rep.add("slit1 ^ slit2 = 0", int(slits.meet[slit1, slit2]) == slits.bottom)
    names = [f"bin{j + 1}" for j in range(k)]
    bad = None
    for u in range(nb):
        lhs = int(s.join[slit1 * nb + u, slit2 * nb + u])
        if lhs != one * nb + u:
            bad = bad or {"U": mask_label(u, names), "join": s.name(lhs)}
    rep.add("(slit1,U) v (slit2,U) = (1,U)", bad is None, bad, {"tested": nb})
    return rep


def run_demo(name: str, arg: int | None = None) -> Report:
    if name == "spin":
        return spin_demo()
    if name == "schwinger":
        return schwinger_demo(3 if arg is None else arg)
    if name == "twoslit":
        return twoslit_demo(4 if arg is None else arg)
    raise ValueError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}")
