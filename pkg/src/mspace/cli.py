"""Command-line front end.

    mspace check quantale FILE
    mspace check space FILE [--lattice]
    mspace check groupoid (FILE | --pair N | --groupoid SPEC)
    mspace observer (--pair N | --group Zk | --action Zk | --groupoid SPEC | --input FILE) [--suite S]
    mspace demo (spin | schwinger N | twoslit K)

Exit status: 0 when no check fails, 1 when some check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .demos import run_demo
from .groupoid import (
    GroupoidError,
    FiniteGroupoid,
    load_groupoid,
    named_group,
    group_groupoid,
    pair_groupoid,
    parse_groupoid_spec,
    regular_action_groupoid,
    structure_report,
    verify_groupoid_axioms,
)
from .observer import DEFAULT_SAMPLES, DEFAULT_THRESHOLD, SUITES, ObserverError, build_canonical_observer, verify_observer
from .quantale import NotAProjection, StructureError, gelfand_class, is_inverse_quantal_frame, load_quantale, verify_quantale
from .report import Report
from .space import SpaceError, is_sober, is_sober_lattice, load_space, t0_violation

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
GLOBAL_DEFAULTS = {"seed": 0, "samples": DEFAULT_SAMPLES, "threshold": DEFAULT_THRESHOLD, "format": "text"}


class InputError(Exception):
    """Bad input; the message says where."""


def _load(loader, path: str):
    try:
        return loader(path)
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    except (StructureError, SpaceError, GroupoidError, NotAProjection, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_check_quantale(args) -> Report:
    q = _load(load_quantale, args.file)
    rep = verify_quantale(q)
    rep.suite = "quantale"
    if not rep.ok:
        return rep
    g = gelfand_class(q)
    w = g.witnesses.get("stably Gelfand")
    rep.add("stably Gelfand", g.is_stably_gelfand, None if w is None else {"a": q.element(w)})
    iqf, _ = is_inverse_quantal_frame(q)
    rep.summary["class"] = g.classification
    rep.summary["inverse quantal frame"] = iqf
    return rep


def cmd_check_space(args) -> Report:
    s = _load(load_space, args.file)
    if args.lattice:
        _, rep = is_sober_lattice(s)
        return rep
    rep = Report("space", population={"points": s.n, "opens": len(s.opens), "mode": "exhaustive"})
    t0 = t0_violation(s)
    rep.add("T0", t0 is None, None if t0 is None else {"points": list(t0)})
    sober, why = is_sober(s)
    rep.add("sober", sober, why)
    return rep


def cmd_check_groupoid(args) -> Report:
    if args.pair is not None:
        g = _groupoid_from(lambda: pair_groupoid(args.pair), f"--pair {args.pair}")
    elif args.groupoid is not None:
        g = _groupoid_from(lambda: parse_groupoid_spec(args.groupoid), f"--groupoid {args.groupoid}")
    elif args.file is not None:
        g = _load(load_groupoid, args.file)
    else:
        raise InputError("check groupoid needs FILE, --pair or --groupoid")
    rep = verify_groupoid_axioms(g)
    if rep.ok:
        st = structure_report(g)
        rep.summary["principal"] = st.principal
        rep.summary["orbits"] = len(st.orbits)
    return rep


def _groupoid_from(build, where: str) -> FiniteGroupoid:
    try:
        return build()
    except (GroupoidError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from None


def observer_groupoid(args) -> FiniteGroupoid:
    if args.pair is not None:
        return _groupoid_from(lambda: pair_groupoid(args.pair), f"--pair {args.pair}")
    if args.group is not None:
        def build():
            t, names = named_group(args.group)
            return group_groupoid(t, names, args.group)

        return _groupoid_from(build, f"--group {args.group}")
    if args.action is not None:
        return _groupoid_from(lambda: regular_action_groupoid(args.action), f"--action {args.action}")
    if args.groupoid is not None:
        return _groupoid_from(lambda: parse_groupoid_spec(args.groupoid), f"--groupoid {args.groupoid}")
    return _load(load_groupoid, args.input)


def cmd_observer(args) -> Report:
    g = observer_groupoid(args)
    axioms = verify_groupoid_axioms(g)
    if not axioms.ok:
        return axioms
    obs = build_canonical_observer(g)
    try:
        return verify_observer(obs, args.suite, seed=args.seed, samples=args.samples, threshold=args.threshold)
    except ObserverError as exc:
        raise InputError(f"observer: {exc}") from None


def cmd_demo(args) -> Report:
    try:
        return run_demo(args.name, args.size)
    except (GroupoidError, ValueError) as exc:
        raise InputError(f"demo {args.name}: {exc}") from None


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for sampled populations (default 0)")
    common.add_argument("--samples", type=_positive, default=argparse.SUPPRESS, help=f"random samples per law (default {DEFAULT_SAMPLES})")
    common.add_argument("--threshold", type=_positive, default=argparse.SUPPRESS, help=f"exhaustive sweep limit (default {DEFAULT_THRESHOLD})")
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="mspace", description="Verify finite measurement-space structures.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="verify a structure loaded from JSON", parents=[common])
    csub = check.add_subparsers(dest="kind", required=True)
    cq = csub.add_parser("quantale", parents=[common])
    cq.add_argument("file")
    cq.set_defaults(func=cmd_check_quantale)
    cs = csub.add_parser("space", parents=[common])
    cs.add_argument("file")
    cs.add_argument("--lattice", action="store_true", help="also check the sober-lattice laws")
    cs.set_defaults(func=cmd_check_space)
    cg = csub.add_parser("groupoid", parents=[common])
    cg.add_argument("file", nargs="?")
    cg.add_argument("--pair", type=_positive)
    cg.add_argument("--groupoid", metavar="SPEC")
    cg.set_defaults(func=cmd_check_groupoid)

    ob = sub.add_parser("observer", help="run suites on the canonical observer of a groupoid", parents=[common])
    src = ob.add_mutually_exclusive_group(required=True)
    src.add_argument("--pair", type=_positive, metavar="N")
    src.add_argument("--group", metavar="NAME", help="Zk or Sn")
    src.add_argument("--action", metavar="NAME", help="regular action of Zk or Sn")
    src.add_argument("--groupoid", metavar="SPEC", help="e.g. pair(2)+pair(1)")
    src.add_argument("--input", metavar="FILE")
    ob.add_argument("--suite", choices=SUITES, default="all")
    ob.set_defaults(func=cmd_observer)

    dm = sub.add_parser("demo", help="worked examples", parents=[common])
    dm.add_argument("name", choices=("spin", "schwinger", "twoslit"))
    dm.add_argument("size", nargs="?", type=int, help="values for schwinger, bins for twoslit")
    dm.set_defaults(func=cmd_demo)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    # parsers share the common actions, so defaults are filled in here rather than by set_defaults
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        rep = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = rep.dumps() if args.format == "json" else rep.render_text()
    sys.stdout.write(out)
    return EXIT_OK if rep.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
