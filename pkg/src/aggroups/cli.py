"""Command-line front end; every subcommand is a thin adapter over the library."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bruteforce, enumeration, involutions, structure, table
from .abelian import format_type, parse_type
from .formats import (
    FormatError,
    dumps,
    endomorphism_dumps,
    endomorphism_loads,
    load_table,
    module_dumps,
    module_loads,
    report_to_dict,
    table_dumps,
    table_text_dumps,
)
from .involutions import BudgetExceeded, Endomorphism

log = logging.getLogger("aggroups")

EXIT_OK, EXIT_FAILS, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(obj, fmt: str, text: str | None = None, csv: str | None = None):
    if fmt == "text" and text is not None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    elif fmt == "csv" and csv is not None:
        sys.stdout.write(csv)
    else:
        sys.stdout.write(dumps(obj) + "\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _table_arg(path: str) -> table.CayleyTable:
    _read(path)
    return load_table(path)


def _parse_matrix(s: str) -> list[list[int]]:
    s = s.strip()
    try:
        if s.startswith("["):
            m = json.loads(s)
        else:
            m = [[int(x) for x in row.replace(",", " ").split()] for row in s.split(";")]
    except (ValueError, json.JSONDecodeError):
        raise UsageError(f"cannot parse matrix {s!r}; use '[[a,b],[c,d]]' or 'a b; c d'") from None
    if isinstance(m, int):
        m = [[m]]
    return m


def _table_out(t: table.CayleyTable, fmt: str):
    csv = "".join(",".join(str(x) for x in row) + "\n" for row in t.tolist())
    if fmt == "json":
        sys.stdout.write(table_dumps(t) + "\n")
    else:
        _emit(None, fmt, text=table_text_dumps(t), csv=csv)


# -- subcommands -------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    if args.table_1:
        cells = enumeration.table_1_regression(stretch=args.stretch, jobs=args.jobs)
        ok = all(c["ok"] is not False for c in cells)
        text = ["   p  d  expected       got  status   method"]
        for c in cells:
            status = "skip" if c["ok"] is None else ("PASS" if c["ok"] else "FAIL")
            got = "-" if c["got"] is None else c["got"]
            text.append(f"{c['p']:>4} {c['d']:>2} {c['expected']:>9} {got:>9}  {status:<7}  {c['method']}")
        csv = "p,d,expected,got,ok,method\n" + "".join(
            f"{c['p']},{c['d']},{c['expected']},{'' if c['got'] is None else c['got']},{c['ok']},{c['method']}\n" for c in cells
        )
        _emit({"cells": cells, "passed": ok}, args.format, text="\n".join(text), csv=csv)
        return EXIT_OK if ok else EXIT_FAILS
    if args.n is None:
        raise UsageError("enumerate needs --n N or --table-1")
    res = enumeration.count(args.n, method=args.method, reps=args.reps, stretch=args.stretch, jobs=args.jobs)
    d = res.to_dict(reps=args.reps)
    text = f"a({res.n}) = {res.count}\n" + "".join(f"  {g['group']}: {g['classes']}\n" for g in d["per_group"])
    csv = "group,classes\n" + "".join(f"{g['group']},{g['classes']}\n" for g in d["per_group"])
    _emit(d, args.format, text=text, csv=csv)
    return EXIT_OK


def cmd_construct(args) -> int:
    t = parse_type(args.group)
    if args.involution:
        phi = endomorphism_loads(_read(args.involution))
        if phi.owner != t:
            raise UsageError(f"involution file is for {format_type(phi.owner)}, not {format_type(t)}")
    elif args.matrix:
        phi = Endomorphism(t, tuple(tuple(r) for r in _parse_matrix(args.matrix)))
    else:
        raise UsageError("construct needs --involution FILE or --matrix M")
    if args.seed is not None:
        phi = involutions.conjugate(involutions.random_automorphism(t, args.seed), phi)
    rep = table.AGRepresentation(t, phi)
    _table_out(table.construct(rep), args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    t = _table_arg(args.table)
    laws = table.LAWS if args.all else [args.law]
    reports = [table.check(t, law, max_quartic=args.max_quartic) for law in laws]
    holds = all(r.holds for r in reports)
    text = "".join(f"{r.law:<16}{'holds' if r.holds else 'fails at ' + str(r.witness)}\n" for r in reports)
    _emit({"holds": holds, "reports": [report_to_dict(r) for r in reports]}, args.format, text=text)
    return EXIT_OK if holds else EXIT_FAILS


def cmd_convert(args) -> int:
    if args.to_module:
        if not args.table:
            raise UsageError("--to-module needs --table FILE")
        t = _table_arg(args.table)
        try:
            m = table.to_module(t)
        except table.NotAnAGGroup as exc:
            _emit({"error": str(exc), "report": report_to_dict(exc.report)}, "json")
            return EXIT_FAILS
        sys.stdout.write(module_dumps(m) + "\n")
        return EXIT_OK
    if not args.module:
        raise UsageError("--to-table needs --module FILE")
    m = module_loads(_read(args.module))
    try:
        t = table.from_module(m)
    except table.InvalidModule as exc:
        _emit({"error": str(exc), "witness": exc.witness}, "json")
        return EXIT_FAILS
    _table_out(t, args.format)
    return EXIT_OK


def cmd_isomorphic(args) -> int:
    a, b = _table_arg(args.a), _table_arg(args.b)
    f = structure.isomorphic(a, b, method=args.method)
    verdict = "isomorphic" if f is not None else "not isomorphic"
    obj = {"isomorphic": f is not None, "result": verdict, "bijection": None if f is None else [int(x) for x in f]}
    text = verdict if f is None else "isomorphic via " + " ".join(str(int(x)) for x in f)
    _emit(obj, args.format, text=text)
    return EXIT_OK if f is not None else EXIT_FAILS


def cmd_subalgebras(args) -> int:
    t = _table_arg(args.table)
    try:
        subs = structure.subalgebras(t)
    except table.NotAnAGGroup as exc:
        _emit({"error": str(exc), "report": report_to_dict(exc.report)}, "json")
        return EXIT_FAILS
    obj = {"subalgebras": [sorted(s) for s in subs]}
    if args.congruences:
        obj["congruences"] = [[list(b) for b in p] for p in structure.congruences(t)]
    text = "".join("{" + ", ".join(map(str, sorted(s))) + "}\n" for s in subs)
    if args.congruences:
        text += "congruences:\n" + "".join(
            "  " + " | ".join(" ".join(map(str, b)) for b in p) + "\n" for p in obj["congruences"]
        )
    _emit(obj, args.format, text=text)
    return EXIT_OK


def cmd_bruteforce(args) -> int:
    reps, stats = bruteforce.find_all(args.order, latin_pruning=not args.no_latin_pruning, cap=args.cap, jobs=args.jobs)
    if args.emit_tables:
        out = Path(args.emit_tables)
        out.mkdir(parents=True, exist_ok=True)
        for i, t in enumerate(reps):
            (out / f"ag{args.order}_{i}.json").write_text(table_dumps(t) + "\n")
    _emit(stats.to_dict(timing=args.timing), args.format)
    return EXIT_OK


def cmd_classify(args) -> int:
    t = parse_type(args.group)
    kw = {"max_order": involutions.STRETCH_MAX_ORDER} if args.stretch else {}
    cl = involutions.classify_involutions(t, method=args.method, **kw)
    obj = {
        "group": format_type(t),
        "count": cl.count,
        "total_involutions": cl.total_involutions,
        "classes": [{"matrix": [list(r) for r in rep.matrix], "size": size} for rep, size in cl.classes],
    }
    text = f"{format_type(t)}: {cl.count} classes\n" + "".join(
        f"  {[list(r) for r in rep.matrix]}  size={size if size is not None else '?'}\n" for rep, size in cl.classes
    )
    _emit(obj, args.format, text=text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for parallel searches")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="aggroups", description="Abel-Grassmann groups: build, check, classify, count.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", parents=[common], help="count AG-groups of order n")
    s.add_argument("--n", type=int)
    s.add_argument("--table-1", action="store_true", help="regression against the published table")
    s.add_argument("--reps", action="store_true", help="attach involution matrices")
    s.add_argument("--method", choices=("auto", "direct"), default="auto")
    s.add_argument("--stretch", action="store_true", help="raise the direct budget to order 256")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("construct", parents=[common], help="Cayley table of AG(G, phi)")
    s.add_argument("--group", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--involution", metavar="FILE")
    g.add_argument("--matrix", metavar="M")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("verify", parents=[common], help="check laws on a table")
    s.add_argument("--table", required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--law", choices=table.LAWS + ("AGss",))
    g.add_argument("--all", action="store_true")
    s.add_argument("--max-quartic", type=int, default=table.QUARTIC_LIMIT)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("convert", parents=[common], help="table <-> module data")
    s.add_argument("--table")
    s.add_argument("--module")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--to-module", action="store_true")
    g.add_argument("--to-table", action="store_true")
    s.set_defaults(func=cmd_convert)

    s = sub.add_parser("isomorphic", parents=[common], help="isomorphism test")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--method", choices=("auto", "module", "generic"), default="auto")
    s.set_defaults(func=cmd_isomorphic)

    s = sub.add_parser("subalgebras", parents=[common], help="sub-AG-groups (and congruences)")
    s.add_argument("--table", required=True)
    s.add_argument("--congruences", action="store_true")
    s.set_defaults(func=cmd_subalgebras)

    s = sub.add_parser("bruteforce", parents=[common], help="exhaustive table search")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--no-latin-pruning", action="store_true")
    s.add_argument("--emit-tables", metavar="DIR")
    s.add_argument("--cap", type=int, default=bruteforce.DEFAULT_CAP)
    s.add_argument("--timing", action="store_true", help="include wall time in the stats")
    s.set_defaults(func=cmd_bruteforce)

    s = sub.add_parser("classify", parents=[common], help="involution classes of an abelian group")
    s.add_argument("--group", required=True)
    s.add_argument("--method", choices=("auto", "direct", "fast"), default="auto")
    s.add_argument("--stretch", action="store_true")
    s.set_defaults(func=cmd_classify)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
