"""Cayley tables, law checkers and the module translations.

Every checker is exhaustive and returns a :class:`CheckReport`; a failing
report carries the lexicographically least violating tuple, which
:func:`reproduces` can re-evaluate.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .abelian import AbelianGroupType
from .involutions import Endomorphism, compose, identity, is_automorphism

__all__ = [
    "CayleyTable",
    "CheckReport",
    "AGRepresentation",
    "Module",
    "NotAnAGGroup",
    "NotAQuasigroup",
    "InvalidModule",
    "LAWS",
    "check",
    "check_all",
    "reproduces",
    "left_units",
    "inverses",
    "construct",
    "divisions",
    "to_module",
    "from_module",
    "characterizations",
    "is_ag_group",
]

# Each law is a single identity or property.  "AG**" is the identity a(bc) = b(ac)
# alone; an AG**-groupoid is a table where both "AG" and "AG**" hold.
LAWS = ("AG", "AG**", "medial", "paramedial", "quasigroup", "left_unit", "unique_inverses")

_ALIASES = {law.lower(): law for law in LAWS}
_ALIASES.update({"agss": "AG**", "ag_star": "AG**", "agstar": "AG**", "leftunit": "left_unit",
                 "inverses": "unique_inverses", "latin": "quasigroup"})

# quartic checkers above this order need an explicit override
QUARTIC_LIMIT = 128


class NotAQuasigroup(ValueError):
    pass


class NotAnAGGroup(ValueError):
    def __init__(self, report: "CheckReport"):
        super().__init__(f"not an AG-group: {report.law} fails at {report.witness}")
        self.report = report


class InvalidModule(ValueError):
    def __init__(self, msg: str, witness=None):
        super().__init__(msg if witness is None else f"{msg} (witness {witness})")
        self.witness = witness


@dataclass(frozen=True, eq=False)
class CayleyTable:
    """Groupoid on 0..n-1 with ``table[a, b] = a*b``."""

    table: np.ndarray

    def __post_init__(self):
        t = np.array(self.table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise ValueError(f"Cayley table must be square, got shape {t.shape}")
        n = t.shape[0]
        if n == 0:
            raise ValueError("empty Cayley table")
        bad = np.argwhere((t < 0) | (t >= n))
        if len(bad):
            a, b = bad[0]
            raise ValueError(f"entry ({a},{b}) = {t[a, b]} outside 0..{n - 1}")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def n(self) -> int:
        return self.table.shape[0]

    def __getitem__(self, ab):
        return self.table[ab]

    def __eq__(self, other):
        return isinstance(other, CayleyTable) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def tolist(self) -> list[list[int]]:
        return self.table.tolist()

    def relabel(self, perm: Sequence[int]) -> "CayleyTable":
        """Isomorphic copy in which element ``a`` is renamed ``perm[a]``."""
        perm = np.asarray(perm)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(len(perm))
        return CayleyTable(perm[self.table[np.ix_(inv, inv)]])

    @cached_property
    def _quasigroup(self) -> bool:
        return check(self, "quasigroup").holds


@dataclass(frozen=True)
class CheckReport:
    law: str
    holds: bool
    witness: tuple | None = None

    def __post_init__(self):
        if self.holds != (self.witness is None):
            raise ValueError("witness must be present exactly when the law fails")

    def __bool__(self):
        return self.holds


def _law(name: str) -> str:
    try:
        return _ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown law {name!r}; expected one of {', '.join(LAWS)}") from None


def _first(mask: np.ndarray):
    hit = np.argwhere(mask)
    return None if not len(hit) else tuple(int(x) for x in hit[0])


def _check_cubic(T: np.ndarray, lhs_rhs) -> tuple | None:
    n = len(T)
    chunk = max(1, (1 << 22) // (n * n))
    for a0 in range(0, n, chunk):
        a = np.arange(a0, min(n, a0 + chunk))
        lhs, rhs = lhs_rhs(T, a)
        w = _first(lhs != rhs)
        if w is not None:
            return (w[0] + a0, *w[1:])
    return None


def _ag(T, a):
    # (ab)c vs (cb)a
    n = len(T)
    ab = T[a][:, :, None]
    c = np.arange(n)[None, None, :]
    cb = T.T[None, :, :]  # [., b, c] -> T[c, b]
    return T[ab, c], T[cb, a[:, None, None]]


def _ag_star(T, a):
    # a(bc) vs b(ac)
    n = len(T)
    b = np.arange(n)[None, :, None]
    bc = T[None, :, :]
    ac = T[a][:, None, :]
    return T[a[:, None, None], bc], T[b, ac]


def _quartic(T: np.ndarray, which: str) -> tuple | None:
    n = len(T)
    for a in range(n):
        ab = T[a][:, None, None]
        cd = T[None, :, :]
        lhs = T[ab, cd]
        if which == "medial":  # (ab)(cd) = (ac)(bd)
            rhs = T[T[a][None, :, None], T[:, None, :]]
        else:  # (ab)(cd) = (db)(ca)
            rhs = T[T.T[:, None, :], T[:, a][None, :, None]]
        w = _first(lhs != rhs)
        if w is not None:
            return (a, *w)
    return None


def _dup_pair(row: np.ndarray) -> tuple[int, int] | None:
    seen: dict[int, int] = {}
    best = None
    for j, v in enumerate(row.tolist()):
        if v in seen:
            cand = (seen[v], j)
            if best is None or cand < best:
                best = cand
        else:
            seen[v] = j
    return best


def left_units(t: CayleyTable) -> list[int]:
    return [int(e) for e in np.flatnonzero((t.table == np.arange(t.n)).all(axis=1))]


def inverses(t: CayleyTable, e: int) -> list[list[int]]:
    """For each a, all b with a*b = b*a = e."""
    T = t.table
    both = (T == e) & (T.T == e)
    return [[int(b) for b in np.flatnonzero(both[a])] for a in range(t.n)]


def check(t: CayleyTable, law: str, max_quartic: int = QUARTIC_LIMIT) -> CheckReport:
    law = _law(law)
    T = t.table
    n = t.n
    w: tuple | None
    if law == "AG":
        w = _check_cubic(T, _ag)
    elif law == "AG**":
        w = _check_cubic(T, _ag_star)
    elif law in ("medial", "paramedial"):
        if n > max_quartic:
            raise ValueError(f"{law} check on order {n} exceeds limit {max_quartic}; raise max_quartic")
        w = _quartic(T, law)
    elif law == "quasigroup":
        w = None
        for r in range(n):
            d = _dup_pair(T[r])
            if d:
                w = ("row", r, *d)
                break
        if w is None:
            for c in range(n):
                d = _dup_pair(T[:, c])
                if d:
                    w = ("col", c, *d)
                    break
    elif law == "left_unit":
        if left_units(t):
            w = None
        else:
            w = tuple(int(np.flatnonzero(T[e] != np.arange(n))[0]) for e in range(n))
    else:  # unique_inverses
        units = left_units(t)
        if not units:
            w = ("no_left_unit",)
        elif len(units) > 1:
            w = ("left_units", units[0], units[1])
        else:
            w = None
            for a, inv in enumerate(inverses(t, units[0])):
                if len(inv) != 1:
                    w = ("no_inverse", a) if not inv else ("inverses", a, inv[0], inv[1])
                    break
    return CheckReport(law, w is None, w)


def check_all(t: CayleyTable, max_quartic: int = QUARTIC_LIMIT) -> dict[str, CheckReport]:
    return {law: check(t, law, max_quartic) for law in LAWS}


def reproduces(t: CayleyTable, report: CheckReport) -> bool:
    """Re-evaluate the law at the report's witness; True iff it is violated there."""
    if report.holds:
        return False
    T, w = t.table, report.witness
    law = report.law
    if law == "AG":
        a, b, c = w
        return T[T[a, b], c] != T[T[c, b], a]
    if law == "AG**":
        a, b, c = w
        return T[a, T[b, c]] != T[b, T[a, c]]
    if law == "medial":
        a, b, c, d = w
        return T[T[a, b], T[c, d]] != T[T[a, c], T[b, d]]
    if law == "paramedial":
        a, b, c, d = w
        return T[T[a, b], T[c, d]] != T[T[d, b], T[c, a]]
    if law == "quasigroup":
        kind, i, j, k = w
        return bool(T[i, j] == T[i, k]) if kind == "row" else bool(T[j, i] == T[k, i])
    if law == "left_unit":
        return len(w) == t.n and all(T[e, a] != a for e, a in enumerate(w))
    kind = w[0]
    if kind == "no_left_unit":
        return not left_units(t)
    if kind == "left_units":
        units = left_units(t)
        return w[1] in units and w[2] in units and w[1] != w[2]
    e = left_units(t)[0]
    a = w[1]
    if kind == "no_inverse":
        return not inverses(t, e)[a]
    return {w[2], w[3]} <= set(inverses(t, e)[a]) and w[2] != w[3]


def is_ag_group(t: CayleyTable) -> bool:
    return all(check(t, law).holds for law in ("AG", "left_unit", "unique_inverses"))


# -- representations ------------------------------------------------------------


@dataclass(frozen=True)
class AGRepresentation:
    """AG(G, phi): the groupoid a*b = phi(a) + b on the abelian group G."""

    group: AbelianGroupType
    involution: Endomorphism

    def __post_init__(self):
        if self.involution.owner != self.group:
            raise ValueError("involution belongs to a different group")
        if not is_automorphism(self.involution):
            raise ValueError("phi is not an automorphism")
        if compose(self.involution, self.involution) != identity(self.group):
            raise ValueError("phi is not an involution")


def construct(rep: AGRepresentation) -> CayleyTable:
    t = rep.group
    return CayleyTable(t.add_table[rep.involution.perm])


def divisions(t: CayleyTable) -> tuple[np.ndarray, np.ndarray]:
    """(right_div, left_div) with right_div[b, a] * a = b and a * left_div[a, b] = b."""
    rep = check(t, "quasigroup")
    if not rep.holds:
        raise NotAQuasigroup(f"not a quasigroup: {rep.witness}")
    T, n = t.table, t.n
    x = np.arange(n)
    right = np.empty((n, n), dtype=np.int64)
    left = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        right[T[:, a], a] = x
        left[a, T[a]] = x
    return right, left


@dataclass(frozen=True, eq=False)
class Module:
    """Abelian group (as an addition table) with an involutory automorphism."""

    addition: CayleyTable
    phi: np.ndarray
    zero: int

    def __post_init__(self):
        p = np.array(self.phi, dtype=np.int64)
        p.setflags(write=False)
        object.__setattr__(self, "phi", p)
        object.__setattr__(self, "zero", int(self.zero))

    def __eq__(self, other):
        return (
            isinstance(other, Module)
            and self.addition == other.addition
            and np.array_equal(self.phi, other.phi)
            and self.zero == other.zero
        )

    @property
    def neg(self) -> np.ndarray:
        return np.argmax(self.addition.table == self.zero, axis=1)


def validate_module(m: Module) -> None:
    A, phi, z = m.addition.table, m.phi, m.zero
    n = len(A)
    x = np.arange(n)
    if phi.shape != (n,) or not ((0 <= phi) & (phi < n)).all():
        raise InvalidModule("phi is not a map on the group elements")
    if not 0 <= z < n:
        raise InvalidModule(f"zero {z} out of range")
    if not np.array_equal(A[z], x):
        raise InvalidModule("zero is not an additive identity", _first(A[z] != x))
    w = _first(A != A.T)
    if w:
        raise InvalidModule("addition is not commutative", w)
    w = _check_cubic(A, lambda T, a: (T[T[a][:, :, None], x[None, None, :]], T[a[:, None, None], T[None, :, :]]))
    if w:
        raise InvalidModule("addition is not associative", w)
    if not (A == z).any(axis=1).all():
        raise InvalidModule("missing additive inverse", (int(np.flatnonzero(~(A == z).any(axis=1))[0]),))
    w = _first(phi[A] != A[phi[:, None], phi[None, :]])
    if w:
        raise InvalidModule("phi is not additive", w)
    w = _first(phi[phi] != x)
    if w:
        raise InvalidModule("phi is not an involution", w)


def to_module(t: CayleyTable) -> Module:
    """(G, +, phi, 0) with a+b = (a e) b, phi(a) = a e, 0 = e where e = a/a."""
    for law in ("AG", "left_unit", "unique_inverses"):
        rep = check(t, law)
        if not rep.holds:
            raise NotAnAGGroup(rep)
    right, _ = divisions(t)
    diag = np.diagonal(right)
    if (diag != diag[0]).any():
        raise AssertionError("a/a is not constant on an AG-group")
    e = int(diag[0])
    T = t.table
    phi = T[:, e]
    m = Module(CayleyTable(T[phi]), phi, e)
    validate_module(m)
    return m


def from_module(m: Module) -> CayleyTable:
    """a*b = phi(a) + b; the inverse operation is a -> phi(-a) and e = 0."""
    validate_module(m)
    return CayleyTable(m.addition.table[m.phi])


def ag_inverse(t: CayleyTable) -> np.ndarray:
    """a -> a^-1 for an AG-group table."""
    if not is_ag_group(t):
        raise NotAnAGGroup(next(r for r in (check(t, l) for l in ("AG", "left_unit", "unique_inverses")) if not r.holds))
    e = left_units(t)[0]
    return np.array([inv[0] for inv in inverses(t, e)], dtype=np.int64)


def characterizations(t: CayleyTable) -> dict[str, bool]:
    """The four equivalent descriptions of AG-groups, evaluated independently."""
    r = {law: check(t, law).holds for law in ("AG", "AG**", "paramedial", "quasigroup", "left_unit", "unique_inverses")}
    try:
        to_module(t)
        module = True
    except (NotAnAGGroup, NotAQuasigroup, InvalidModule):
        module = False
    return {
        "ag_group": r["AG"] and r["left_unit"] and r["unique_inverses"],
        "ag_star_quasigroup": r["AG"] and r["AG**"] and r["quasigroup"],
        "paramedial_quasigroup_with_left_unit": r["paramedial"] and r["quasigroup"] and r["left_unit"],
        "module": module,
    }
