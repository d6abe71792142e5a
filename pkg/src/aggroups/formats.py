"""Text and JSON formats for tables, endomorphisms, modules and reports.

All ``*_dumps`` functions emit a canonical form: parsing it and dumping again
reproduces the same string byte for byte.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .abelian import format_type, parse_type
from .involutions import Endomorphism
from .table import CayleyTable, CheckReport, Module

__all__ = [
    "FormatError",
    "dumps",
    "table_dumps",
    "table_loads",
    "table_text_dumps",
    "table_text_loads",
    "load_table",
    "endomorphism_dumps",
    "endomorphism_loads",
    "module_dumps",
    "module_loads",
    "report_dumps",
    "report_loads",
    "report_to_dict",
]


class FormatError(ValueError):
    pass


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators."""
    return json.dumps(obj, sort_keys=True, separators=(", ", ": "))


def _json(s: str, what: str):
    try:
        return json.loads(s)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{what}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _field(obj, key: str, what: str):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"{what}: missing field {key!r}")
    return obj[key]


def _square(rows, what: str, field: str) -> list[list[int]]:
    if not isinstance(rows, list) or not rows:
        raise FormatError(f"{what}: field {field!r} must be a non-empty list of rows")
    n = len(rows)
    for i, r in enumerate(rows):
        if not isinstance(r, list) or len(r) != n or not all(isinstance(x, int) and not isinstance(x, bool) for x in r):
            raise FormatError(f"{what}: field {field!r} row {i} must hold {n} integers")
    return rows


def table_dumps(t: CayleyTable) -> str:
    return dumps({"order": t.n, "table": t.tolist()})


def table_loads(s: str) -> CayleyTable:
    obj = _json(s, "table")
    n = _field(obj, "order", "table")
    rows = _square(_field(obj, "table", "table"), "table", "table")
    if n != len(rows):
        raise FormatError(f"table: field 'order' = {n} but the table has {len(rows)} rows")
    try:
        return CayleyTable(rows)
    except ValueError as exc:
        raise FormatError(f"table: field 'table': {exc}") from None


def table_text_dumps(t: CayleyTable) -> str:
    return "".join(" ".join(str(x) for x in row) + "\n" for row in t.tolist())


def table_text_loads(s: str) -> CayleyTable:
    lines = [ln for ln in s.splitlines() if ln.strip()]
    n = len(lines)
    rows = []
    for i, ln in enumerate(lines, start=1):
        try:
            row = [int(x) for x in ln.split()]
        except ValueError:
            raise FormatError(f"line {i}: non-integer entry in {ln.strip()!r}") from None
        if len(row) != n:
            raise FormatError(f"line {i}: expected {n} entries, found {len(row)}")
        bad = [x for x in row if not 0 <= x < n]
        if bad:
            raise FormatError(f"line {i}: entry {bad[0]} outside 0..{n - 1}")
        rows.append(row)
    if not rows:
        raise FormatError("line 1: empty table")
    return CayleyTable(rows)


def load_table(path: str | Path) -> CayleyTable:
    text = Path(path).read_text()
    return table_loads(text) if text.lstrip().startswith("{") else table_text_loads(text)


def endomorphism_dumps(f: Endomorphism) -> str:
    return dumps({"group": format_type(f.owner), "matrix": [list(r) for r in f.matrix]})


def endomorphism_loads(s: str) -> Endomorphism:
    obj = _json(s, "endomorphism")
    try:
        t = parse_type(_field(obj, "group", "endomorphism"))
    except ValueError as exc:
        raise FormatError(f"endomorphism: field 'group': {exc}") from None
    m = _field(obj, "matrix", "endomorphism")
    if t.rank == 0 and m == []:
        m = []
    elif not isinstance(m, list) or len(m) != t.rank or any(not isinstance(r, list) or len(r) != t.rank for r in m):
        raise FormatError(f"endomorphism: field 'matrix' must be {t.rank}x{t.rank} for {format_type(t)}")
    try:
        return Endomorphism(t, tuple(tuple(r) for r in m))
    except ValueError as exc:
        raise FormatError(f"endomorphism: field 'matrix': {exc}") from None


def module_dumps(m: Module) -> str:
    return dumps({"addition": m.addition.tolist(), "phi": [int(x) for x in m.phi], "zero": m.zero})


def module_loads(s: str) -> Module:
    obj = _json(s, "module")
    rows = _square(_field(obj, "addition", "module"), "module", "addition")
    phi = _field(obj, "phi", "module")
    zero = _field(obj, "zero", "module")
    if not isinstance(phi, list) or len(phi) != len(rows):
        raise FormatError(f"module: field 'phi' must list {len(rows)} images")
    if not isinstance(zero, int):
        raise FormatError("module: field 'zero' must be an integer")
    try:
        return Module(CayleyTable(rows), np.array(phi), zero)
    except ValueError as exc:
        raise FormatError(f"module: {exc}") from None


def report_to_dict(r: CheckReport) -> dict:
    return {"holds": r.holds, "law": r.law, "witness": None if r.witness is None else list(r.witness)}


def report_dumps(r: CheckReport) -> str:
    return dumps(report_to_dict(r))


def report_loads(s: str) -> CheckReport:
    obj = _json(s, "report")
    w = _field(obj, "witness", "report")
    return CheckReport(_field(obj, "law", "report"), bool(_field(obj, "holds", "report")), None if w is None else tuple(w))
