"""Isomorphisms, subalgebras and congruences of Cayley tables."""
from __future__ import annotations

from collections import Counter
from typing import Iterable, Sequence

import numpy as np

from ._search import GroupTable, find_module_iso
from .table import CayleyTable, NotAnAGGroup, ag_inverse, check, is_ag_group, left_units, to_module

__all__ = [
    "isomorphic",
    "is_isomorphism",
    "element_invariants",
    "fingerprint",
    "subalgebras",
    "submodules",
    "congruences",
    "principal_congruence",
    "is_congruence",
    "congruence_from_subalgebra",
    "is_protic_normal",
    "CONGRUENCE_LIMIT",
]

CONGRUENCE_LIMIT = 16

Partition = tuple[tuple[int, ...], ...]


# -- isomorphism ------------------------------------------------------------------


def is_isomorphism(t1: CayleyTable, t2: CayleyTable, f: Sequence[int]) -> bool:
    f = np.asarray(f)
    if t1.n != t2.n or len(np.unique(f)) != t1.n:
        return False
    return bool((f[t1.table] == t2.table[np.ix_(f, f)]).all())


def element_invariants(t: CayleyTable) -> list[tuple]:
    """Isomorphism-invariant profile of each element."""
    T, n = t.table, t.n
    x = np.arange(n)
    sq = T[x, x]
    out = []
    for a in range(n):
        # length of the orbit a, a*a, (a*a)*a, ... before it repeats
        seen, y = {}, a
        while y not in seen:
            seen[y] = len(seen)
            y = int(T[y, a])
        out.append((
            bool(sq[a] == a),
            int((T[a] == x).sum()),
            int((T[:, a] == x).sum()),
            int((sq == a).sum()),
            len(set(T[a].tolist())),
            len(set(T[:, a].tolist())),
            len(seen),
            seen[y],
        ))
    return out


def fingerprint(t: CayleyTable) -> tuple:
    return tuple(sorted(Counter(element_invariants(t)).items()))


def _generic_iso(t1: CayleyTable, t2: CayleyTable) -> np.ndarray | None:
    """Image-by-image backtracking with propagation along products."""
    n = t1.n
    if n != t2.n:
        return None
    i1, i2 = element_invariants(t1), element_invariants(t2)
    if Counter(i1) != Counter(i2):
        return None
    T1, T2 = t1.table.tolist(), t2.table.tolist()
    cands: dict[tuple, list[int]] = {}
    for y in range(n):
        cands.setdefault(i2[y], []).append(y)
    # rarest invariant classes first
    order = sorted(range(n), key=lambda a: (len(cands[i1[a]]), a))

    def assign(f, finv, mapped, x, y) -> bool:
        work = [(x, y)]
        while work:
            a, b = work.pop()
            if f[a] != -1:
                if f[a] != b:
                    return False
                continue
            if finv[b] != -1 or i2[b] != i1[a]:
                return False
            f[a], finv[b] = b, a
            mapped.append(a)
            for c in list(mapped):
                fc = f[c]
                work.append((T1[a][c], T2[b][fc]))
                work.append((T1[c][a], T2[fc][b]))
        return True

    def rec(f, finv, mapped):
        x = next((a for a in order if f[a] == -1), None)
        if x is None:
            return f
        for y in cands[i1[x]]:
            if finv[y] != -1:
                continue
            f2, finv2, m2 = f[:], finv[:], mapped[:]
            if assign(f2, finv2, m2, x, y):
                r = rec(f2, finv2, m2)
                if r is not None:
                    return r
        return None

    res = rec([-1] * n, [-1] * n, [])
    return None if res is None else np.array(res, dtype=np.int64)


def _module_iso(t1: CayleyTable, t2: CayleyTable) -> np.ndarray | None:
    m1, m2 = to_module(t1), to_module(t2)
    g1, g2 = GroupTable(m1.addition.table, m1.zero), GroupTable(m2.addition.table, m2.zero)
    return find_module_iso(g1, m1.phi, g2, m2.phi)


def isomorphic(t1: CayleyTable, t2: CayleyTable, method: str = "auto") -> np.ndarray | None:
    """A bijection f with f(a*b) = f(a)*f(b), or None.

    ``method="module"`` uses the reduction to abelian groups with involutions
    (AG-groups only), ``"generic"`` plain backtracking; ``"auto"`` picks the
    module path when both tables are AG-groups.
    """
    if method not in ("auto", "module", "generic"):
        raise ValueError(f"unknown method {method!r}")
    if t1.n != t2.n:
        return None
    if method == "auto":
        method = "module" if is_ag_group(t1) and is_ag_group(t2) else "generic"
    f = _module_iso(t1, t2) if method == "module" else _generic_iso(t1, t2)
    if f is not None and not is_isomorphism(t1, t2, f):
        raise AssertionError(f"{method} search returned a non-isomorphism")
    return f


# -- subalgebras ------------------------------------------------------------------


def _closure(mask: np.ndarray, binary: Sequence[np.ndarray], unary: Sequence[np.ndarray]) -> np.ndarray:
    mask = mask.copy()
    while True:
        idx = np.flatnonzero(mask)
        new = mask.copy()
        for B in binary:
            new[B[np.ix_(idx, idx)].ravel()] = True
        for U in unary:
            new[U[idx]] = True
        if (new == mask).all():
            return mask
        mask = new


def _lattice(n: int, base: Iterable[int], close) -> list[frozenset[int]]:
    start = np.zeros(n, dtype=bool)
    start[list(base)] = True
    first = close(start)
    found = {first.tobytes(): first}
    frontier = [first]
    while frontier:
        nxt = []
        for m in frontier:
            for x in np.flatnonzero(~m):
                m2 = m.copy()
                m2[x] = True
                m2 = close(m2)
                key = m2.tobytes()
                if key not in found:
                    found[key] = m2
                    nxt.append(m2)
        frontier = nxt
    subs = [frozenset(int(i) for i in np.flatnonzero(m)) for m in found.values()]
    return sorted(subs, key=lambda s: (len(s), sorted(s)))


def subalgebras(t: CayleyTable) -> list[frozenset[int]]:
    """All subsets containing e and closed under * and ^-1."""
    inv = ag_inverse(t)
    e = left_units(t)[0]
    return _lattice(t.n, [e], lambda m: _closure(m, [t.table], [inv]))


def submodules(t: CayleyTable) -> list[frozenset[int]]:
    """Submodules of the associated module: closed under +, -, phi, containing 0."""
    m = to_module(t)
    return _lattice(t.n, [m.zero], lambda s: _closure(s, [m.addition.table], [m.neg, m.phi]))


def _closed_under_ag_ops(t: CayleyTable, H) -> bool:
    inv = ag_inverse(t)
    e = left_units(t)[0]
    h = np.array(sorted(H), dtype=np.int64)
    mask = np.zeros(t.n, dtype=bool)
    mask[h] = True
    return bool(mask[e] and mask[t.table[np.ix_(h, h)]].all() and mask[inv[h]].all())


# -- congruences ------------------------------------------------------------------


class _UF:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, x: int) -> int:
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.p[rb] = ra
        return True

    def labels(self) -> tuple[int, ...]:
        return tuple(min_label for min_label in (self.find(x) for x in range(len(self.p))))


def _blocks(labels: Sequence[int]) -> Partition:
    out: dict[int, list[int]] = {}
    for x, l in enumerate(labels):
        out.setdefault(l, []).append(x)
    return tuple(sorted(tuple(b) for b in out.values()))


def _labels(blocks: Partition, n: int) -> tuple[int, ...]:
    lab = [0] * n
    for b in blocks:
        for x in b:
            lab[x] = min(b)
    return tuple(lab)


def _generate(t: CayleyTable, pairs: Iterable[tuple[int, int]], uf: _UF | None = None) -> _UF:
    T = t.table.tolist()
    n = t.n
    uf = uf or _UF(n)
    work = list(pairs)
    while work:
        x, y = work.pop()
        if uf.union(x, y):
            for z in range(n):
                work.append((T[x][z], T[y][z]))
                work.append((T[z][x], T[z][y]))
    return uf


def principal_congruence(t: CayleyTable, a: int, b: int) -> Partition:
    """Smallest congruence identifying a and b."""
    return _blocks(_generate(t, [(a, b)]).labels())


def is_congruence(t: CayleyTable, blocks: Partition) -> bool:
    lab = np.array(_labels(blocks, t.n))
    T = t.table
    same = lab[:, None] == lab[None, :]
    # a~b implies a*z ~ b*z and z*a ~ z*b
    for a, b in np.argwhere(same):
        if (lab[T[a]] != lab[T[b]]).any() or (lab[T[:, a]] != lab[T[:, b]]).any():
            return False
    return True


def congruences(t: CayleyTable, limit: int = CONGRUENCE_LIMIT) -> list[Partition]:
    """Every congruence, as joins of principal congruences."""
    n = t.n
    if n > limit:
        raise ValueError(f"congruence search limited to order {limit}; got {n}")
    principal = {}
    for a in range(n):
        for b in range(a + 1, n):
            lab = _generate(t, [(a, b)]).labels()
            principal.setdefault(lab, None)
    gens = list(principal)
    found = {tuple(range(n))}
    found.update(gens)
    frontier = list(gens)
    while frontier:
        nxt = []
        for lab in frontier:
            for g in gens:
                uf = _UF(n)
                for x in range(n):
                    uf.union(x, lab[x])
                    uf.union(x, g[x])
                j = uf.labels()
                if j not in found:
                    found.add(j)
                    nxt.append(j)
        frontier = nxt
    parts = [_blocks(l) for l in found]
    return sorted(parts, key=lambda p: (-len(p), p))


def congruence_from_subalgebra(t: CayleyTable, H: Iterable[int]) -> Partition:
    """Blocks of a ~ b iff b^-1 a in H."""
    H = frozenset(int(h) for h in H)
    if not _closed_under_ag_ops(t, H):
        raise ValueError("H is not a subalgebra")
    inv = ag_inverse(t)
    T = t.table
    inH = np.zeros(t.n, dtype=bool)
    inH[list(H)] = True
    rel = inH[T[inv[:, None], np.arange(t.n)[None, :]]]  # rel[b, a]: b^-1 a in H
    labels = [int(np.flatnonzero(rel[:, a])[0]) for a in range(t.n)]
    return _blocks(labels)


def is_protic_normal(t: CayleyTable, H: Iterable[int]) -> bool:
    """u (a u^-1) in H for all a in H, u in G."""
    H = frozenset(int(h) for h in H)
    if not _closed_under_ag_ops(t, H):
        raise ValueError("H is not closed under the AG-group operations")
    inv = ag_inverse(t)
    T = t.table
    inH = np.zeros(t.n, dtype=bool)
    inH[list(H)] = True
    h = np.array(sorted(H))
    u = np.arange(t.n)
    vals = T[u[None, :], T[h[:, None], inv[None, :]]]
    return bool(inH[vals].all())
