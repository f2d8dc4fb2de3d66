"""Command-line interface: ``lamina <command> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from math import gcd

from .angles import Chord, angle, exact_period, format_angle
from .kneading import InternalAddress, KneadingSequence, address_from_kneading, kneading_of_angle

SCHEMA = "lamina/1"
MAX_CLI_PERIOD = 16
MAX_CLI_Q = 8


class UsageError(Exception):
    pass


def _emit(obj: dict) -> None:
    print(json.dumps({"schema": SCHEMA, **obj}, sort_keys=True, indent=2))


def _angle_arg(text: str) -> Fraction:
    try:
        x = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"malformed fraction {text!r}") from None
    return angle(x)


def _sublimb_arg(text: str) -> tuple[int, int]:
    try:
        p, q = (int(t) for t in text.split("/"))
    except ValueError:
        raise UsageError(f"malformed sublimb {text!r}, expected p/q") from None
    if q < 2 or not 0 < p < q or gcd(p, q) != 1:
        raise UsageError(f"{p}/{q} is not a reduced fraction with 0 < p < q")
    if q > MAX_CLI_Q:
        raise UsageError(f"denominator {q} above the limit {MAX_CLI_Q}")
    return p, q


def _leaf_arg(text: str):
    """A parameter leaf given by one end (``13/31``) or both (``13/31,18/31``)."""
    from .parameter import Leaf, partner

    parts = [t for t in text.replace("-", ",").replace(" ", ",").split(",") if t]
    ends = [_angle_arg(t) for t in parts]
    if len(ends) not in (1, 2):
        raise UsageError(f"malformed leaf {text!r}")
    n = exact_period(ends[0])
    if n is None or n < 2:
        raise UsageError(f"{format_angle(ends[0])} is not periodic of period at least 2")
    if n > MAX_CLI_PERIOD:
        raise UsageError(f"period {n} above the limit {MAX_CLI_PERIOD}")
    other = partner(ends[0])
    if len(ends) == 2 and ends[1] != other:
        raise UsageError(f"{format_angle(ends[0])} and {format_angle(ends[1])} do not form a leaf")
    return Leaf(n, Chord(ends[0], other))


def _chord_arg(text: str) -> Chord:
    parts = [t for t in text.replace(",", " ").split() if t]
    if len(parts) != 2:
        raise UsageError(f"malformed chord {text!r}")
    return Chord(_angle_arg(parts[0]), _angle_arg(parts[1]))


# -- commands -----------------------------------------------------------------

def cmd_bstar(args) -> int:
    from .parameter import cache_dir, get_store

    if not 2 <= args.max_period <= MAX_CLI_PERIOD:
        raise UsageError(f"--max-period must lie in 2..{MAX_CLI_PERIOD}")
    cache = args.cache or cache_dir()
    store = get_store(args.max_period, cache)
    counts = {str(n): len(store.by_period(n)) for n in range(2, args.max_period + 1)}
    if args.json:
        _emit({"max_period": args.max_period, "counts": counts,
               "leaves": [[L.period, *L.chord.as_json()] for L in store]})
    else:
        for n, c in counts.items():
            print(f"period {n}: {c} leaves")
        print(f"total: {len(store)}")
    return 0


def cmd_knead(args) -> int:
    x = _angle_arg(args.angle)
    print(kneading_of_angle(x))
    return 0


def cmd_address(args) -> int:
    if (args.angle is None) == (args.kneading is None):
        raise UsageError("give either an angle or --kneading WORD")
    if args.kneading is not None:
        try:
            k = KneadingSequence.parse(args.kneading)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        k = kneading_of_angle(_angle_arg(args.angle))
    print(address_from_kneading(k, max_entry=args.max_entry))
    return 0


def cmd_admissible(args) -> int:
    from .addresses import ADMISSIBILITY_BOUND, is_admissible

    try:
        a = InternalAddress.parse(args.address)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if a.period > ADMISSIBILITY_BOUND:
        raise UsageError(f"address ends at {a.period}, above the bound {ADMISSIBILITY_BOUND}")
    w = is_admissible(a)
    if w is None:
        print("INADMISSIBLE")
        return 1
    print(f"ADMISSIBLE {format_angle(w)}")
    return 0


def cmd_vistree(args) -> int:
    from .vistree import visibility_tree

    S = _leaf_arg(args.leaf)
    p, q = _sublimb_arg(args.sublimb)
    tree = visibility_tree(S, p, q)
    if args.json:
        _emit({"leaf": S.chord.as_json(), "period": S.period, "sublimb": f"{p}/{q}", **tree.as_json()})
    else:
        print(tree.render_text())
    return 0


def cmd_check(args) -> int:
    from . import principles as pr

    if args.what == "translation":
        from .addresses import is_narrow
        from .parameter import get_store

        if args.leaf is not None:
            raise UsageError("check translation takes no leaf")
        if not 2 <= args.max_period <= 8:
            raise UsageError("--max-period must lie in 2..8")
        if not 3 <= args.max_q <= 6:
            raise UsageError("--max-q must lie in 3..6")
        store = get_store(args.max_period)
        fails = pr.scan_translation(store, args.max_period, args.max_q)
        narrow_fails = [str(S.chord) for S, _ in fails if is_narrow(S)]
        _emit({"check": "translation", "max_period": args.max_period, "max_q": args.max_q,
               "holds": not fails,
               "failures": [{"leaf": str(S.chord), "sublimbs": [f"{p}/{q}" for p, q in bad]}
                            for S, bad in fails],
               "narrow_failures": narrow_fails})
        return 1 if fails else 0
    if args.leaf is None:
        raise UsageError(f"check {args.what} needs a leaf")
    S = _leaf_arg(args.leaf)
    if args.what == "correspondence":
        if args.sublimb is None:
            raise UsageError("check correspondence needs --sublimb p/q")
        p, q = _sublimb_arg(args.sublimb)
        rep = pr.check_correspondence(pr.cached_sublimb(S, p, q))
    else:
        if not 3 <= args.max_q <= MAX_CLI_Q:
            raise UsageError(f"--max-q must lie in 3..{MAX_CLI_Q}")
        rep = pr.check_partial_translation(S, args.max_q)
    print(json.dumps(rep.as_json(), sort_keys=True, indent=2))
    return 0 if rep.holds else 1


def cmd_render(args) -> int:
    from .parameter import get_store
    from .render import RenderSpec, render_svg
    from .vistree import visibility_tree

    highlight = tuple(_chord_arg(h) for h in args.highlight or ())
    try:
        if args.what == "parameter-lamination":
            spec = RenderSpec(args.what, args.max_period, highlight, args.size)
            data = get_store(max(args.max_period, 2))
        elif args.what == "lamination-of-leaf":
            spec = RenderSpec(args.what, args.depth, highlight, args.size)
            data = _leaf_arg(args.leaf or "")
        else:
            if args.sublimb is None:
                raise UsageError("visibility-tree needs --sublimb p/q")
            S = _leaf_arg(args.leaf or "")
            p, q = _sublimb_arg(args.sublimb)
            spec = RenderSpec(args.what, 0, highlight + (S.chord,), args.size)
            data = visibility_tree(S, p, q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    svg = render_svg(spec, data)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lamina", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bstar", help="enumerate periodic parameter leaves")
    b.add_argument("--max-period", type=int, required=True)
    b.add_argument("--cache")
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bstar)

    k = sub.add_parser("knead", help="kneading sequence of an angle")
    k.add_argument("angle")
    k.set_defaults(func=cmd_knead)

    a = sub.add_parser("address", help="internal address of an angle or kneading sequence")
    a.add_argument("angle", nargs="?")
    a.add_argument("--kneading")
    a.add_argument("--max-entry", type=int, default=64)
    a.set_defaults(func=cmd_address)

    ad = sub.add_parser("admissible", help="decide whether an internal address is realized")
    ad.add_argument("address")
    ad.set_defaults(func=cmd_admissible)

    v = sub.add_parser("vistree", help="visibility tree of a leaf in a sublimb")
    v.add_argument("leaf")
    v.add_argument("--sublimb", required=True)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_vistree)

    c = sub.add_parser("check", help="run a checker")
    c.add_argument("what", choices=["translation", "correspondence", "theorem-I"])
    c.add_argument("leaf", nargs="?")
    c.add_argument("--sublimb")
    c.add_argument("--max-period", type=int, default=5)
    c.add_argument("--max-q", type=int, default=3)
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("render", help="write an SVG picture")
    r.add_argument("what", choices=["lamination-of-leaf", "parameter-lamination", "visibility-tree"])
    r.add_argument("leaf", nargs="?")
    r.add_argument("--sublimb")
    r.add_argument("--depth", type=int, default=6)
    r.add_argument("--max-period", type=int, default=6)
    r.add_argument("--size", type=int, default=600)
    r.add_argument("--highlight", action="append", help='chord as "a/b c/d"; repeatable')
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_render)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"lamina: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
