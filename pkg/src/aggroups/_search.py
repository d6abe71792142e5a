"""Backtracking over generator images with subgroup-closure propagation.

Both involution enumeration and conjugator/module-isomorphism search assign an
image to one generator at a time.  Every assignment is immediately closed to
the subgroup it generates together with the current domain, which either
extends the partial homomorphism or exposes an inconsistency.
"""
from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

__all__ = ["BudgetExceeded", "PartialHom", "GroupTable", "involution_maps", "find_module_iso"]


class BudgetExceeded(RuntimeError):
    """A search exceeded its configured node or order budget."""


class GroupTable:
    """Derived data for an abelian group given by its addition table."""

    def __init__(self, add: np.ndarray, zero: int = 0):
        self.add = np.asarray(add, dtype=np.int64)
        self.n = len(self.add)
        self.zero = int(zero)
        idx = np.arange(self.n)
        self.neg = np.argmax(self.add == self.zero, axis=1).astype(np.int64)
        # element orders by repeated addition
        order = np.zeros(self.n, dtype=np.int64)
        cur = idx.copy()
        k = 1
        while (order == 0).any():
            order[(cur == self.zero) & (order == 0)] = k
            cur = self.add[cur, idx]
            k += 1
        self.order = order
        self.exponent = int(np.lcm.reduce(order)) if self.n else 1
        self._mul: dict[int, np.ndarray] = {}
        # multiples[x, k] = k*x for 0 <= k <= exponent
        mult = np.empty((self.n, self.exponent + 1), dtype=np.int64)
        mult[:, 0] = self.zero
        for k in range(1, self.exponent + 1):
            mult[:, k] = self.add[mult[:, k - 1], idx]
        self.multiples = mult
        self.prime_powers = _prime_power_divisors(self.exponent)
        # divisibility profile: is x in q*G for every prime power q | exponent
        prof = [self.mul(q) for q in self.prime_powers]
        div = np.zeros((self.n, len(prof)), dtype=bool)
        for c, img in enumerate(prof):
            div[np.unique(img), c] = True
        self.divisible = div

    def mul(self, k: int) -> np.ndarray:
        k %= max(self.exponent, 1)
        if k not in self._mul:
            res = np.full(self.n, self.zero, dtype=np.int64)
            base = np.arange(self.n)
            e = k
            while e:
                if e & 1:
                    res = self.add[res, base]
                base = self.add[base, base]
                e >>= 1
            self._mul[k] = res
        return self._mul[k]

    def sub(self, a, b):
        return self.add[a, self.neg[b]]

    def closure(self, elems: Sequence[int]) -> np.ndarray:
        """Boolean mask of the subgroup generated by ``elems``."""
        mask = np.zeros(self.n, dtype=bool)
        mask[self.zero] = True
        members = np.array([self.zero])
        for x in elems:
            if mask[x]:
                continue
            z = x
            new = [members]
            while not mask[z]:
                coset = self.add[members, z]
                mask[coset] = True
                new.append(coset)
                z = self.add[z, x]
            members = np.concatenate(new)
        return mask

    def generators(self) -> list[int]:
        """Greedy generating set, largest element orders first."""
        mask = np.zeros(self.n, dtype=bool)
        mask[self.zero] = True
        gens: list[int] = []
        for x in sorted(range(self.n), key=lambda i: (-self.order[i], i)):
            if not mask[x]:
                gens.append(x)
                mask = self.closure(gens)
        return gens


def _prime_power_divisors(m: int) -> list[int]:
    out, p = [], 2
    while m > 1:
        if m % p == 0:
            q = p
            while m % p == 0:
                out.append(q)
                m //= p
                q *= p
        p += 1
    return out


class PartialHom:
    """Injective homomorphism defined on a subgroup of the source."""

    __slots__ = ("src", "dst", "dom", "img", "used", "members")

    def __init__(self, src: GroupTable, dst: GroupTable):
        self.src, self.dst = src, dst
        self.dom = np.zeros(src.n, dtype=bool)
        self.img = np.full(src.n, -1, dtype=np.int64)
        self.used = np.zeros(dst.n, dtype=bool)
        self.dom[src.zero] = True
        self.img[src.zero] = dst.zero
        self.used[dst.zero] = True
        self.members = np.array([src.zero], dtype=np.int64)

    def copy(self) -> "PartialHom":
        c = PartialHom.__new__(PartialHom)
        c.src, c.dst = self.src, self.dst
        c.dom = self.dom.copy()
        c.img = self.img.copy()
        c.used = self.used.copy()
        c.members = self.members
        return c

    @property
    def complete(self) -> bool:
        return len(self.members) == self.src.n

    def extend(self, x: int, y: int) -> bool:
        """Impose x -> y; close under addition.  False on inconsistency."""
        if self.dom[x]:
            return self.img[x] == y
        src, dst = self.src, self.dst
        xs = src.multiples[x]
        # m = order of x modulo the current domain
        m = int(np.argmax(self.dom[xs[1:]])) + 1
        ys = dst.multiples[y]
        ks = np.arange(m + 1) % dst.exponent
        if self.img[xs[m]] != ys[ks[m]]:
            return False
        # injective on H + <x> iff no k*y (0 < k < m) already lies in f(H)
        if self.used[ys[ks[1:m]]].any():
            return False
        H = self.members
        block = src.add[H[:, None], xs[None, 1:m]].ravel()
        bimg = dst.add[self.img[H][:, None], ys[None, ks[1:m]]].ravel()
        self.dom[block] = True
        self.img[block] = bimg
        self.used[bimg] = True
        self.members = np.concatenate([H, block])
        return True


class _Budget:
    def __init__(self, limit: int | None, what: str):
        self.limit, self.what, self.nodes = limit, what, 0

    def tick(self):
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            raise BudgetExceeded(f"{self.what}: node budget {self.limit} exceeded")


def _height_signature(g: GroupTable) -> list[tuple]:
    """Per-element (order, divisibility profile) pairs; automorphism invariant."""
    return [(int(g.order[x]), g.divisible[x].tobytes()) for x in range(g.n)]


def involution_maps(
    g: GroupTable,
    gens: Sequence[int],
    node_budget: int | None = None,
    stats: dict | None = None,
    images_only: bool = False,
) -> Iterator[np.ndarray]:
    """Yield every involutory automorphism of ``g`` as an element permutation.

    Each involution is produced once: along any branch the next unresolved
    generator is forced, and the branch is labelled by that generator's image.
    With ``images_only`` only the images of ``gens`` are yielded.
    """
    gens_arr = np.asarray(gens, dtype=np.int64)
    sig = _height_signature(g)
    cands = {x: [v for v in range(g.n) if sig[v] == sig[x]] for x in gens}
    budget = _Budget(node_budget, "involution enumeration")

    def rec(ph: PartialHom):
        budget.tick()
        x = next((x for x in gens if not ph.dom[x]), None)
        if x is None:
            yield ph.img[gens_arr] if images_only else ph.img.copy()
            return
        for v in cands[x]:
            if ph.dom[v]:
                continue
            child = ph.copy()
            if child.extend(x, v) and child.extend(v, x):
                yield from rec(child)

    yield from rec(PartialHom(g, g))
    if stats is not None:
        stats["nodes"] = stats.get("nodes", 0) + budget.nodes


def module_signature(g: GroupTable, phi: np.ndarray) -> list[tuple]:
    """Per-element invariants preserved by any module isomorphism."""
    phi = np.asarray(phi)
    idx = np.arange(g.n)
    minus = g.sub(phi, idx)
    plus = g.add[phi, idx]
    im_minus = np.zeros(g.n, dtype=bool)
    im_minus[minus] = True
    im_plus = np.zeros(g.n, dtype=bool)
    im_plus[plus] = True
    fixed = phi == idx
    return [
        (
            int(g.order[x]), g.divisible[x].tobytes(),
            int(g.order[minus[x]]), g.divisible[minus[x]].tobytes(),
            int(g.order[plus[x]]), g.divisible[plus[x]].tobytes(),
            bool(im_minus[x]), bool(im_plus[x]), bool(fixed[x]),
        )
        for x in range(g.n)
    ]


def find_module_iso(
    g1: GroupTable, phi1: np.ndarray, g2: GroupTable, phi2: np.ndarray,
    gens1: Sequence[int] | None = None, node_budget: int | None = None, budget: _Budget | None = None,
) -> np.ndarray | None:
    """Bijection f with f(a+b) = f(a)+f(b) and f(phi1(a)) = phi2(f(a)), or None.

    ``budget`` lets several searches draw on one shared node allowance; it
    overrides ``node_budget``.
    """
    if g1.n != g2.n:
        return None
    phi1, phi2 = np.asarray(phi1), np.asarray(phi2)
    s1, s2 = module_signature(g1, phi1), module_signature(g2, phi2)
    if sorted(s1) != sorted(s2):
        return None
    if gens1 is None:
        gens1 = g1.generators()
    by_sig: dict[tuple, list[int]] = {}
    for w in range(g2.n):
        by_sig.setdefault(s2[w], []).append(w)
    if budget is None:
        budget = _Budget(node_budget, "conjugator search")

    def rec(ph: PartialHom):
        budget.tick()
        x = next((x for x in gens1 if not ph.dom[x]), None)
        if x is None:
            return ph.img.copy()
        for w in by_sig.get(s1[x], ()):
            if ph.used[w]:
                continue
            child = ph.copy()
            if child.extend(x, w) and child.extend(int(phi1[x]), int(phi2[w])):
                found = rec(child)
                if found is not None:
                    return found
        return None

    return rec(PartialHom(g1, g2))
