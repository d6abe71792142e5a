"""Exhaustive Cayley-table search for AG-groups, independent of any representation.

Element 0 is fixed as the left unit.  Cells are filled row-major from row 1;
every assignment propagates the identity (ab)c = (cb)a through all four cells
of each affected instance, optionally together with latin-square and inverse
constraints.  Isomorphism classes are separated afterwards by fingerprint
buckets and generic bijection search.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .structure import fingerprint, isomorphic
from .table import CayleyTable, check

__all__ = ["SearchStats", "find_all", "labeled_models", "find_groupoids", "verify_representation", "DEFAULT_CAP", "HARD_CAP"]

DEFAULT_CAP = 6
HARD_CAP = 8
NO_LATIN_CAP = 4


@dataclass
class SearchStats:
    order: int
    nodes: int
    labeled: int
    classes: int
    seconds: float = 0.0

    def to_dict(self, timing: bool = False) -> dict:
        d = asdict(self)
        if not timing:
            d.pop("seconds")
        return d


class _State:
    __slots__ = ("n", "t", "pos", "row", "col")

    def copy(self) -> "_State":
        s = _State.__new__(_State)
        s.n = self.n
        s.t = self.t[:]
        s.pos = [p[:] for p in self.pos]
        s.row = self.row[:]
        s.col = self.col[:]
        return s


class _Search:
    def __init__(self, n: int, left_unit: bool, latin: bool, inverses: bool):
        self.n, self.left_unit, self.latin, self.inverses = n, left_unit, latin, inverses
        self.full = (1 << n) - 1
        self.nodes = 0

    def initial(self) -> _State | None:
        n = self.n
        s = _State()
        s.n = n
        s.t = [-1] * (n * n)
        s.pos = [[] for _ in range(n)]
        s.row = [0] * n
        s.col = [0] * n
        if self.left_unit:
            if not self._assign_all(s, [(0, b, b) for b in range(n)]):
                return None
        return s

    def _assign_all(self, s: _State, cells) -> bool:
        queue: list[int] = []
        for a, b, v in cells:
            if not self._set(s, a, b, v, queue):
                return False
        return self._propagate(s, queue)

    def _set(self, s: _State, a: int, b: int, v: int, queue: list[int]) -> bool:
        n = self.n
        i = a * n + b
        cur = s.t[i]
        if cur >= 0:
            return cur == v
        if self.latin:
            bit = 1 << v
            if s.row[a] & bit or s.col[b] & bit:
                return False
            s.row[a] |= bit
            s.col[b] |= bit
        s.t[i] = v
        s.pos[v].append(i)
        queue.append(i)
        if self.latin and self.inverses and v == 0 and a != b:
            # with unique solutions of a*x = e the inverse must be two-sided
            return self._set(s, b, a, 0, queue)
        return True

    def _propagate(self, s: _State, queue: list[int]) -> bool:
        n, t = self.n, s.t
        while True:
            while queue:
                i = queue.pop()
                r, c0 = divmod(i, n)
                v = t[i]
                # (r c0) as ab or cb, partner (c, c0): t[v][c] == t[y][r]
                for c in range(n):
                    y = t[c * n + c0]
                    if y < 0:
                        continue
                    L, R = t[v * n + c], t[y * n + r]
                    if L >= 0:
                        if R >= 0:
                            if L != R:
                                return False
                        elif not self._set(s, y, r, L, queue):
                            return False
                    elif R >= 0 and not self._set(s, v, c, R, queue):
                        return False
                # (r c0) as the outer product x*c with x = r = t[a][b], c = c0
                for j in s.pos[r]:
                    a, b = divmod(j, n)
                    z = t[c0 * n + b]
                    if z < 0:
                        continue
                    L = t[z * n + a]
                    if L >= 0:
                        if L != v:
                            return False
                    elif not self._set(s, z, a, v, queue):
                        return False
            if not self.latin:
                return True
            # naked singles
            for i in range(n * n):
                if t[i] >= 0:
                    continue
                a, b = divmod(i, n)
                free = self.full & ~(s.row[a] | s.col[b])
                if not free:
                    return False
                if free & (free - 1) == 0:
                    if not self._set(s, a, b, free.bit_length() - 1, queue):
                        return False
            if not queue:
                return True

    def _row_has_inverse(self, s: _State, a: int) -> bool:
        n, t = self.n, s.t
        for b in range(n):
            x, y = t[a * n + b], t[b * n + a]
            if (x == 0 or x < 0) and (y == 0 or y < 0):
                return True
        return False

    def candidates(self, s: _State, a: int, b: int) -> list[int]:
        if self.latin:
            free = self.full & ~(s.row[a] | s.col[b])
            return [v for v in range(self.n) if free >> v & 1]
        return list(range(self.n))

    def next_cell(self, s: _State) -> int | None:
        for i, v in enumerate(s.t):
            if v < 0:
                return i
        return None

    def run(self, s: _State):
        self.nodes += 1
        i = self.next_cell(s)
        if i is None:
            yield s.t
            return
        a, b = divmod(i, self.n)
        for v in self.candidates(s, a, b):
            child = s.copy()
            if self._assign_all(child, [(a, b, v)]):
                if self.inverses and not self.latin:
                    done_rows = [r for r in range(self.n) if all(x >= 0 for x in child.t[r * self.n:(r + 1) * self.n])]
                    if not all(self._row_has_inverse(child, r) for r in done_rows):
                        continue
                yield from self.run(child)


def _tables(flat: list[int], n: int) -> CayleyTable:
    return CayleyTable([flat[i * n:(i + 1) * n] for i in range(n)])


def _branch(args):
    n, latin, left_unit, inverses, first = args
    search = _Search(n, left_unit=left_unit, latin=latin, inverses=inverses)
    s = search.initial()
    out = []
    if s is not None:
        i = search.next_cell(s)
        if i is None:
            out = [tuple(s.t)] if first is None else []
        else:
            a, b = divmod(i, n)
            child = s.copy()
            if search._assign_all(child, [(a, b, first)]):
                out = [tuple(t) for t in search.run(child)]
    return out, search.nodes


def _labeled(n: int, latin: bool, left_unit: bool, inverses: bool, jobs: int):
    search = _Search(n, left_unit=left_unit, latin=latin, inverses=inverses)
    s = search.initial()
    if s is None:
        return [], 0
    i = search.next_cell(s)
    if i is None:
        return [tuple(s.t)], 1
    a, b = divmod(i, n)
    work = [(n, latin, left_unit, inverses, v) for v in search.candidates(s, a, b)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_branch, work))
    else:
        results = [_branch(w) for w in work]
    flat = sorted({t for ts, _ in results for t in ts})
    return flat, 1 + sum(k for _, k in results)


def _reduce(tables: list[CayleyTable]) -> list[CayleyTable]:
    buckets: dict[tuple, list[CayleyTable]] = {}
    reps: list[CayleyTable] = []
    for t in tables:
        bucket = buckets.setdefault(fingerprint(t), [])
        if all(isomorphic(r, t, method="generic") is None for r in bucket):
            bucket.append(t)
            reps.append(t)
    return reps


def _check_order(n: int, latin_pruning: bool, cap: int):
    if n < 1:
        raise ValueError(f"invalid order {n}")
    if n > min(cap, HARD_CAP):
        raise ValueError(f"order {n} above the brute-force cap {min(cap, HARD_CAP)}")
    if not latin_pruning and n > NO_LATIN_CAP:
        raise ValueError(f"search without latin pruning is limited to order {NO_LATIN_CAP}")


def _models(n: int, latin_pruning: bool, jobs: int) -> tuple[list[CayleyTable], int]:
    flat, nodes = _labeled(n, latin_pruning, True, True, jobs)
    models = []
    for f in flat:
        t = _tables(list(f), n)
        if all(check(t, law).holds for law in ("AG", "left_unit", "unique_inverses")):
            models.append(t)
    return models, nodes


def labeled_models(
    n: int, latin_pruning: bool = True, cap: int = DEFAULT_CAP, jobs: int = 1
) -> list[CayleyTable]:
    """Every AG-group table of order ``n`` whose left unit is element 0, in sorted order."""
    _check_order(n, latin_pruning, cap)
    return _models(n, latin_pruning, jobs)[0]


def find_all(
    n: int, latin_pruning: bool = True, cap: int = DEFAULT_CAP, jobs: int = 1
) -> tuple[list[CayleyTable], SearchStats]:
    """One table per isomorphism class of AG-groups of order ``n``."""
    _check_order(n, latin_pruning, cap)
    start = time.perf_counter()
    models, nodes = _models(n, latin_pruning, jobs)
    reps = _reduce(models)
    stats = SearchStats(n, nodes, len(models), len(reps), time.perf_counter() - start)
    return reps, stats


def find_groupoids(n: int, ag_star: bool = False) -> list[CayleyTable]:
    """Every labeled AG-groupoid (or AG**-groupoid) of order n <= 4."""
    if not 1 <= n <= NO_LATIN_CAP:
        raise ValueError(f"groupoid search limited to orders 1..{NO_LATIN_CAP}")
    flat, _ = _labeled(n, latin=False, left_unit=False, inverses=False, jobs=1)
    tables = [_tables(list(f), n) for f in flat]
    if ag_star:
        tables = [t for t in tables if check(t, "AG**").holds]
    return tables


def verify_representation(n: int, cap: int = DEFAULT_CAP, jobs: int = 1) -> bool:
    """Every brute-forced AG-group matches exactly one AG(G, phi), and conversely."""
    from .enumeration import count
    from .table import construct

    found, _ = find_all(n, cap=cap, jobs=jobs)
    result = count(n, reps=True)
    built = [construct(r) for r in result.representatives]
    if len(found) != len(built) or result.count != len(built):
        return False
    matched = set()
    for t in found:
        hits = [i for i, b in enumerate(built) if isomorphic(t, b, method="generic") is not None]
        if len(hits) != 1:
            return False
        matched.add(hits[0])
    return len(matched) == len(built)
