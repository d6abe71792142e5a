"""Finite abelian groups in primary decomposition.

A group type is the tuple of its cyclic prime-power factors, grouped by prime
(ascending) with exponents descending inside each prime, e.g. ``(8, 2, 3)`` for
Z8 x Z2 x Z3.  Elements are coordinate tuples; element indices enumerate the
coordinates in lexicographic order, so index 0 is always the zero element.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

import numpy as np
from sympy import factorint
from sympy.utilities.iterables import partitions

__all__ = [
    "AbelianGroupType",
    "groups_of_order",
    "add",
    "neg",
    "zero",
    "elements",
    "parse_type",
    "format_type",
    "to_invariant_factors",
    "from_invariant_factors",
    "MAX_ORDER",
]

# every order handled here must index comfortably into int64 numpy arrays
MAX_ORDER = 1 << 20

Element = tuple[int, ...]


def _prime_power(q: int) -> tuple[int, int]:
    f = factorint(q)
    if q < 2 or len(f) != 1:
        raise ValueError(f"{q} is not a prime power >= 2")
    ((p, a),) = f.items()
    return p, a


@dataclass(frozen=True)
class AbelianGroupType:
    """Isomorphism type of a finite abelian group, as cyclic prime-power factors."""

    factors: tuple[int, ...]

    def __post_init__(self):
        facs = tuple(int(q) for q in self.factors)
        keyed = [(*_prime_power(q), q) for q in facs]
        canon = tuple(q for _, _, q in sorted(keyed, key=lambda x: (x[0], -x[1])))
        object.__setattr__(self, "factors", canon)
        if self.order > MAX_ORDER:
            raise ValueError(f"order {self.order} exceeds supported bound {MAX_ORDER}")

    @classmethod
    def from_exponents(cls, p: int, exponents: Sequence[int]) -> "AbelianGroupType":
        return cls(tuple(p**e for e in exponents if e > 0))

    @property
    def order(self) -> int:
        return int(np.prod(self.factors, dtype=np.int64)) if self.factors else 1

    @property
    def rank(self) -> int:
        return len(self.factors)

    @cached_property
    def primes(self) -> tuple[int, ...]:
        return tuple(sorted({_prime_power(q)[0] for q in self.factors}))

    @cached_property
    def prime_of_factor(self) -> tuple[int, ...]:
        return tuple(_prime_power(q)[0] for q in self.factors)

    def exponents(self, p: int) -> tuple[int, ...]:
        """Partition of the p-part: exponents of the cyclic p-factors, descending."""
        return tuple(_prime_power(q)[1] for q in self.factors if q % p == 0)

    def sylow(self, p: int) -> "AbelianGroupType":
        return AbelianGroupType(tuple(q for q in self.factors if q % p == 0))

    def sylow_slices(self) -> list[tuple[int, slice]]:
        """Coordinate ranges of the p-primary parts, in canonical order."""
        out, start = [], 0
        for p in self.primes:
            k = sum(1 for q in self.factors if q % p == 0)
            out.append((p, slice(start, start + k)))
            start += k
        return out

    def __str__(self) -> str:
        return format_type(self)

    # -- index arithmetic, cached per type -------------------------------------

    @cached_property
    def radix(self) -> np.ndarray:
        """Positional weights turning coordinates into element indices."""
        w = np.ones(self.rank, dtype=np.int64)
        for i in range(self.rank - 2, -1, -1):
            w[i] = w[i + 1] * self.factors[i + 1]
        return w

    @cached_property
    def coords(self) -> np.ndarray:
        """(order x rank) array: row i holds the coordinates of element i."""
        if not self.factors:
            return np.zeros((1, 0), dtype=np.int64)
        grid = np.indices(self.factors, dtype=np.int64).reshape(self.rank, -1).T
        grid.setflags(write=False)
        return grid

    @cached_property
    def modulus(self) -> np.ndarray:
        return np.array(self.factors, dtype=np.int64)

    def index_of(self, coords: np.ndarray) -> np.ndarray | int:
        """Element index (or array of indices) of coordinate rows."""
        c = np.asarray(coords, dtype=np.int64) % self.modulus if self.rank else np.asarray(coords)
        return c @ self.radix if self.rank else (0 if c.ndim == 1 else np.zeros(len(c), np.int64))

    @cached_property
    def add_table(self) -> np.ndarray:
        c = self.coords
        s = (c[:, None, :] + c[None, :, :]) % self.modulus
        tab = s @ self.radix if self.rank else np.zeros((1, 1), dtype=np.int64)
        tab.setflags(write=False)
        return tab

    @cached_property
    def neg_perm(self) -> np.ndarray:
        perm = self.index_of(-self.coords) if self.rank else np.zeros(1, dtype=np.int64)
        perm = np.asarray(perm, dtype=np.int64)
        perm.setflags(write=False)
        return perm

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Indices of the canonical basis elements (one per cyclic factor)."""
        return tuple(int(r) for r in self.radix)

    def mul_table(self, k: int) -> np.ndarray:
        """Index map a -> k*a."""
        return np.asarray(self.index_of(k * self.coords), dtype=np.int64)

    @cached_property
    def element_orders(self) -> np.ndarray:
        out = np.ones(self.order, dtype=np.int64)
        for i, q in enumerate(self.factors):
            col = self.coords[:, i]
            out = np.lcm(out, q // np.gcd(col, q))
        return out


def _validate(t: AbelianGroupType, a: Sequence[int]) -> Element:
    a = tuple(int(x) for x in a)
    if len(a) != t.rank:
        raise ValueError(f"element {a} has {len(a)} coordinates, group {t} needs {t.rank}")
    for x, q in zip(a, t.factors):
        if not 0 <= x < q:
            raise ValueError(f"coordinate {x} out of range for Z{q}")
    return a


def add(t: AbelianGroupType, a: Sequence[int], b: Sequence[int]) -> Element:
    a, b = _validate(t, a), _validate(t, b)
    return tuple((x + y) % q for x, y, q in zip(a, b, t.factors))


def neg(t: AbelianGroupType, a: Sequence[int]) -> Element:
    a = _validate(t, a)
    return tuple((-x) % q for x, q in zip(a, t.factors))


def zero(t: AbelianGroupType) -> Element:
    return (0,) * t.rank


def elements(t: AbelianGroupType) -> Iterator[Element]:
    """All elements in lexicographic coordinate order (zero first)."""
    return product(*(range(q) for q in t.factors))


def element_of(t: AbelianGroupType, i: int) -> Element:
    return tuple(int(x) for x in t.coords[i])


def index(t: AbelianGroupType, a: Sequence[int]) -> int:
    return int(t.index_of(np.array(_validate(t, a), dtype=np.int64)))


def _partitions_desc(d: int) -> list[tuple[int, ...]]:
    out = []
    for part in partitions(d):
        out.append(tuple(sorted((k for k, m in part.items() for _ in range(m)), reverse=True)))
    # lexicographically largest first: Z_{p^d} leads
    return sorted(out, reverse=True)


def groups_of_order(n: int) -> list[AbelianGroupType]:
    """One representative per isomorphism type of abelian group of order ``n``."""
    if n < 1:
        raise ValueError(f"invalid group order {n}")
    if n > MAX_ORDER:
        raise ValueError(f"order {n} exceeds supported bound {MAX_ORDER}")
    per_prime = [
        [tuple(p**e for e in lam) for lam in _partitions_desc(d)]
        for p, d in sorted(factorint(n).items())
    ]
    return [AbelianGroupType(sum(choice, ())) for choice in product(*per_prime)]


# -- text grammar --------------------------------------------------------------

_TOKEN = re.compile(r"^z(\d+)(?:\^(\d+))?$")


def parse_type(s: str) -> AbelianGroupType:
    """Parse ``"Z4xZ2^3"`` style strings (case-insensitive, whitespace-tolerant).

    ``"1"``, ``"Z1"`` and the empty string denote the trivial group.
    """
    body = re.sub(r"\s+", "", s).lower()
    if body in ("", "1", "z1", "trivial"):
        return AbelianGroupType(())
    factors: list[int] = []
    for tok in body.split("x"):
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"cannot parse group factor {tok!r} in {s!r}")
        q, mult = int(m.group(1)), int(m.group(2) or 1)
        if mult < 1:
            raise ValueError(f"power of Z{q} in {s!r} must be at least 1")
        if q == 1:
            continue
        fq = factorint(q)
        if len(fq) != 1:
            raise ValueError(f"factor Z{q} in {s!r} is not of prime-power order")
        factors.extend([q] * mult)
    return AbelianGroupType(tuple(factors))


def format_type(t: AbelianGroupType) -> str:
    if not t.factors:
        return "Z1"
    parts, i = [], 0
    while i < t.rank:
        j = i
        while j < t.rank and t.factors[j] == t.factors[i]:
            j += 1
        parts.append(f"Z{t.factors[i]}" + (f"^{j - i}" if j - i > 1 else ""))
        i = j
    return "x".join(parts)


def to_invariant_factors(t: AbelianGroupType) -> tuple[int, ...]:
    """Invariant factors d1 | d2 | ... (display only)."""
    cols = [sorted((q for q in t.factors if q % p == 0), reverse=True) for p in t.primes]
    k = max((len(c) for c in cols), default=0)
    inv = []
    for i in range(k):
        d = 1
        for c in cols:
            if i < len(c):
                d *= c[i]
        inv.append(d)
    return tuple(reversed(inv))


def from_invariant_factors(ds: Sequence[int]) -> AbelianGroupType:
    return AbelianGroupType(tuple(p**a for d in ds if d > 1 for p, a in factorint(d).items()))
