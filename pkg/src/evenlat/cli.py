"""Command-line front end: ``evenlat <command> ...``.

Exit codes: 0 on success, 1 when a verified claim fails, 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import overlat as ov
from .discform import (discriminant_form, genus_equal, genus_signature, is_two_elementary,
                       level, two_elementary_invariants)
from .expr import parse
from .expr import lattice as expr_lattice
from .lattice import Lattice, LatticeError, load_gram_json
from .roots import coxeter_condition, norm2_check, root_decomposition

VERIFY_TARGETS = ("table1", "thm4.1", "thm4.2", "thm4.3", "thm4.4", "thm4.5", "thm4.6",
                  "complete", "norm2", "all")


class UsageError(Exception):
    pass


def _jsonable(x):
    from .classify.harness import jsonable
    return jsonable(x)


def _emit(args, data: dict, text: str) -> None:
    """Human text to stdout, or JSON to stdout / a file when --json is given."""
    if args.json is not None:
        payload = json.dumps(_jsonable(data), indent=1, sort_keys=True) + "\n"
        if args.json == "-":
            sys.stdout.write(payload)
        else:
            with open(args.json, "w") as fh:
                fh.write(payload)
            if not args.quiet:
                print(text)
    elif not args.quiet:
        print(text)


def _load(args) -> Lattice:
    if getattr(args, "gram", None):
        if args.expr:
            raise UsageError("give either EXPR or --gram FILE, not both")
        return load_gram_json(args.gram)
    if not args.expr:
        raise UsageError("missing lattice expression")
    return expr_lattice(args.expr)


def _label(args, lat: Lattice) -> str:
    return str(parse(args.expr)) if args.expr else (lat.name or args.gram)


def _fmt_q(x) -> str:
    return str(x)


# ------------------------------------------------------------ commands

def cmd_info(args) -> int:
    lat = _load(args)
    d = discriminant_form(lat)
    data = {"lattice": _label(args, lat), "rank": lat.rank, "signature": list(lat.signature),
            "det": lat.det, "orders": list(d.orders), "length": d.length,
            "exponent": d.exponent, "level": level(d)}
    lines = [data["lattice"],
             f"  rank       {lat.rank}",
             f"  signature  ({lat.signature[0]},{lat.signature[1]})",
             f"  det        {lat.det}",
             f"  A_L        {' x '.join(f'Z/{o}' for o in d.orders) or '0'}",
             f"  length     {d.length}",
             f"  exponent   {d.exponent}",
             f"  level      {data['level']}"]
    if is_two_elementary(d):
        npos, nneg, a, delta = two_elementary_invariants(lat)
        data["two_elementary"] = {"a": a, "delta": delta}
        lines.append(f"  2-elementary a={a} delta={delta}")
    _emit(args, data, "\n".join(lines))
    return 0


def cmd_roots(args) -> int:
    lat = _load(args)
    if not lat.is_positive_definite:
        raise UsageError("roots needs a positive definite lattice")
    rd = root_decomposition(lat)
    data = {"lattice": _label(args, lat), "summary": rd.summary(), "roots": 2 * len(rd.roots),
            "rank": rd.rank,
            "components": [{"type": c.type, "rank": c.rank, "roots": c.root_count,
                            "coxeter_number": c.coxeter_number} for c in rd.components],
            "coxeter_condition": coxeter_condition(rd)}
    lines = [f"{data['lattice']}: {rd.summary()}"]
    if rd.components:
        lines.append(f"  {data['roots']} roots spanning rank {rd.rank}")
        for c in rd.components:
            lines.append(f"  {c.type:5s} roots {c.root_count:4d}  h = {c.coxeter_number}")
        lines.append(f"  equal Coxeter numbers off A1: {data['coxeter_condition']}")
    _emit(args, data, "\n".join(lines))
    return 0


def cmd_disc(args) -> int:
    lat = _load(args)
    d = discriminant_form(lat)
    data = {"lattice": _label(args, lat), "orders": list(d.orders),
            "generators": [list(v) for v in d.lifts], "q": list(d.q),
            "b": [list(r) for r in d.b]}
    lines = [f"{data['lattice']}: A_L = {' x '.join(f'Z/{o}' for o in d.orders) or '0'}"]
    for i, (o, v) in enumerate(zip(d.orders, d.lifts)):
        lines.append(f"  g{i}  order {o:3d}  q = {_fmt_q(d.q[i]):>6s} mod 2  lift {[str(x) for x in v]}")
    if d.orders:
        lines.append("  b (mod 1):")
        for row in d.b:
            lines.append("    " + " ".join(f"{str(x):>6s}" for x in row))
    _emit(args, data, "\n".join(lines))
    return 0


def cmd_genus(args) -> int:
    a, b = expr_lattice(args.expr1), expr_lattice(args.expr2)
    eq = genus_equal(a, b)
    data = {"lattices": [str(parse(args.expr1)), str(parse(args.expr2))], "genus_equal": eq,
            "fingerprints": [genus_signature(a).to_json(), genus_signature(b).to_json()]}
    text = f"{data['lattices'][0]} {'~' if eq else '!~'} {data['lattices'][1]}  (genus {'equal' if eq else 'different'})"
    _emit(args, data, text)
    return 0


def cmd_over(args) -> int:
    lat = _load(args)
    d = discriminant_form(lat)
    if args.max_index < 1:
        raise UsageError("--max-index must be positive")
    subs = ov.isotropic_subgroups(d, args.max_index)
    rows = []
    lines = [f"{_label(args, lat)}: even overlattices of index <= {args.max_index}"]
    for h in subs:
        if h.order == 1:
            continue
        step = ov.overlattice(lat, h, d)
        rows.append({"index": step.index, "generators": [list(g) for g in h.generators],
                     "det": step.result.det, "gram": [list(r) for r in step.result.gram],
                     "maximal": ov.is_maximal(step.result)})
        lines.append(f"  index {step.index}  gens {[list(g) for g in h.generators]}  "
                     f"det {step.result.det}{'  maximal' if rows[-1]['maximal'] else ''}")
    if not rows:
        lines.append("  none")
    _emit(args, {"lattice": _label(args, lat), "max_index": args.max_index,
                 "overlattices": rows}, "\n".join(lines))
    return 0


def cmd_split(args) -> int:
    lat = _load(args)
    fn = {"U": ov.split_U, "2U": ov.split_2U, "A1": ov.split_A1}[args.what]
    label = _label(args, lat)
    try:
        sp = fn(lat, max_nodes=args.max_nodes)
    except ov.NotFound as e:
        data = {"lattice": label, "what": args.what, "splits": False, "proven": e.proven,
                "reason": str(e)}
        kind = "proven" if e.proven else "search cap reached"
        _emit(args, data, f"{label}: no {args.what} summand found ({kind}): {e}")
        return 0
    data = {"lattice": label, "what": args.what, "splits": True, "witness_ok": sp.check(lat),
            **sp.to_json()}
    lines = [f"{label} = {args.what} + K"]
    if sp.complement is not None:
        k = sp.complement
        lines.append(f"  K: rank {k.rank}, signature ({k.signature[0]},{k.signature[1]}), det {k.det}")
    lines.append(f"  witness P with P G P^T block diagonal: {data['witness_ok']}")
    _emit(args, data, "\n".join(lines))
    return 0


def cmd_norm2(args) -> int:
    lat = _load(args)
    if not lat.is_positive_definite:
        raise UsageError("norm2 needs a positive definite lattice")
    res = norm2_check(lat)
    mx = max(m.minimum for _, m in res.cosets)
    data = {"lattice": _label(args, lat), "holds": res.holds, "cosets": res.count,
            "max_coset_min": mx,
            "minima": [{"class": list(k), "minimum": m.minimum, "witness": list(m.witness)}
                       for k, m in res.cosets]}
    _emit(args, data, f"{data['lattice']}: {res.count} cosets, max coset minimum {mx}; "
                      f"Norm2 {'holds' if res.holds else 'fails'}")
    return 0


def cmd_verify(args) -> int:
    from .classify import harness as h

    t = args.target
    if t == "table1":
        rep = h.verify_table1()
    elif t == "complete":
        rep = h.verify_complete_list()
    elif t == "norm2":
        rep = h.verify_norm2_corollary()
    elif t == "all":
        rep = h.verify_all()
    else:
        rep = h.verify_theorem(t)
    payload = rep.dumps(timing=args.timing)
    if args.json == "-":
        sys.stdout.write(payload)
    else:
        if args.json is not None:
            with open(args.json, "w") as fh:
                fh.write(payload)
        if not args.quiet:
            print("\n".join(rep.lines()))
            c = rep.counts
            print(f"{rep.name}: " + ", ".join(f"{k} {v}" for k, v in c.items() if v))
    return 0 if rep.ok else 1


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", nargs="?", const="-", metavar="PATH",
                        help="write JSON to PATH (stdout when PATH is omitted)")
    common.add_argument("--quiet", action="store_true", help="suppress human-readable output")
    common.add_argument("--max-nodes", type=int, default=ov.MAX_NODES, metavar="N",
                        help="node cap for vector searches")
    common.add_argument("--seed", help=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="evenlat", description="Even lattices of signature (n,2).")
    sub = p.add_subparsers(dest="command", required=True)

    def with_lattice(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("expr", nargs="?", metavar="EXPR", help='lattice expression, e.g. "2U+E8(2)"')
        sp.add_argument("--gram", metavar="FILE", help="read a Gram matrix from JSON instead")
        sp.set_defaults(func=fn)
        return sp

    with_lattice("info", cmd_info, "signature, det and discriminant invariants")
    with_lattice("roots", cmd_roots, "root system of a positive definite lattice")
    with_lattice("disc", cmd_disc, "discriminant form: generators, q and b")
    sp = sub.add_parser("genus", parents=[common], help="compare genera")
    sp.add_argument("expr1", metavar="EXPR1")
    sp.add_argument("expr2", metavar="EXPR2")
    sp.set_defaults(func=cmd_genus)
    sp = with_lattice("over", cmd_over, "even overlattices up to a given index")
    sp.add_argument("--max-index", type=int, default=4, metavar="K")
    sp = with_lattice("split", cmd_split, "split off U, 2U or A1 with a witness")
    sp.add_argument("--what", choices=("U", "2U", "A1"), required=True)
    with_lattice("norm2", cmd_norm2, "minimum over every coset of L in L'")
    sp = sub.add_parser("verify", parents=[common], help="run claim checks")
    sp.add_argument("target", choices=VERIFY_TARGETS)
    sp.add_argument("--timing", action="store_true", help="include per-claim seconds in JSON")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.seed is not None:
        print("evenlat: --seed is not supported; every computation is deterministic",
              file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (UsageError, LatticeError, ValueError, OSError, json.JSONDecodeError) as e:
        print(f"evenlat: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
