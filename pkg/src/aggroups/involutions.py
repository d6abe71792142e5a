"""Endomorphisms of finite abelian groups and their involutory automorphisms.

An endomorphism is stored as the matrix of generator images: row ``i`` holds
the coordinates of the image of the ``i``-th basis element.  Coordinates are
row vectors, so ``apply(f, a) = a @ M (mod factors)`` and ``compose(f, g)``
(first ``g``, then ``f``) has matrix ``M_g @ M_f``.

Conjugacy classes of involutions are computed as orbits under an explicit
generating set of Aut(G); representatives that share cheap invariants are then
checked pairwise by conjugator search, so the result never depends on the
generating set being complete.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache, reduce
from itertools import product
from math import gcd
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from sympy import primitive_root
from sympy.combinatorics import Permutation, PermutationGroup

from .abelian import AbelianGroupType, _validate, groups_of_order
from ._search import BudgetExceeded, GroupTable, _Budget, find_module_iso, involution_maps

__all__ = [
    "Endomorphism",
    "InvolutionClassification",
    "BudgetExceeded",
    "identity",
    "apply",
    "compose",
    "is_automorphism",
    "inverse",
    "conjugate",
    "aut_generators",
    "aut_order",
    "random_automorphism",
    "involutory_automorphisms",
    "classify_involutions",
    "find_conjugator",
    "involution_invariants",
    "subgroup_type",
    "validate_fast_paths",
    "DEFAULT_NODE_BUDGET",
    "DEFAULT_MAX_ORDER",
    "MEMORY_BUDGET",
]

log = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 5_000_000
# order cap for direct enumeration of a single prime-power part
DEFAULT_MAX_ORDER = 343
STRETCH_MAX_ORDER = 729
# rough ceiling on the arrays built while classifying one prime-power part
MEMORY_BUDGET = 2_500_000_000


@dataclass(frozen=True)
class Endomorphism:
    owner: AbelianGroupType
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        t = self.owner
        rows = tuple(tuple(int(x) for x in r) for r in self.matrix)
        if len(rows) != t.rank or any(len(r) != t.rank for r in rows):
            raise ValueError(f"matrix must be {t.rank}x{t.rank} for group {t}")
        canon = []
        for i, r in enumerate(rows):
            out = []
            for j, x in enumerate(r):
                qi, qj = t.factors[i], t.factors[j]
                step = qj // gcd(qi, qj)
                if x % step:
                    raise ValueError(
                        f"entry ({i},{j}) = {x} is not a multiple of {step}: "
                        f"no homomorphism Z{qi} -> Z{qj} sends 1 to {x}"
                    )
                out.append(x % qj)
            canon.append(tuple(out))
        object.__setattr__(self, "matrix", tuple(canon))

    @classmethod
    def from_array(cls, owner: AbelianGroupType, arr) -> "Endomorphism":
        return cls(owner, tuple(tuple(int(x) for x in r) for r in np.asarray(arr).reshape(owner.rank, owner.rank)))

    @classmethod
    def from_perm(cls, owner: AbelianGroupType, perm) -> "Endomorphism":
        """Recover the matrix from an element map given on indices."""
        perm = np.asarray(perm)
        return cls.from_array(owner, owner.coords[perm[list(owner.generators)]])

    @cached_property
    def array(self) -> np.ndarray:
        a = np.array(self.matrix, dtype=np.int64).reshape(self.owner.rank, self.owner.rank)
        a.setflags(write=False)
        return a

    @cached_property
    def perm(self) -> np.ndarray:
        """Image of every element index."""
        t = self.owner
        if t.rank == 0:
            return np.zeros(1, dtype=np.int64)
        p = np.asarray(t.index_of((t.coords @ self.array) % t.modulus), dtype=np.int64)
        p.setflags(write=False)
        return p

    def __str__(self) -> str:
        return f"{self.owner}:{[list(r) for r in self.matrix]}"


@dataclass(frozen=True)
class InvolutionClassification:
    owner: AbelianGroupType
    classes: tuple[tuple[Endomorphism, int | None], ...]
    total_involutions: int | None
    method: str = "direct"

    @property
    def count(self) -> int:
        return len(self.classes)

    @property
    def representatives(self) -> list[Endomorphism]:
        return [r for r, _ in self.classes]


def identity(t: AbelianGroupType) -> Endomorphism:
    return Endomorphism.from_array(t, np.eye(t.rank, dtype=np.int64))


def apply(f: Endomorphism, a: Sequence[int]) -> tuple[int, ...]:
    t = f.owner
    a = _validate(t, a)
    if not t.rank:
        return ()
    return tuple(int(x) for x in (np.array(a, dtype=np.int64) @ f.array) % t.modulus)


def _same_owner(f: Endomorphism, g: Endomorphism):
    if f.owner != g.owner:
        raise ValueError(f"endomorphisms of different groups: {f.owner} vs {g.owner}")


def compose(f: Endomorphism, g: Endomorphism) -> Endomorphism:
    """The map a -> f(g(a))."""
    _same_owner(f, g)
    t = f.owner
    return Endomorphism.from_array(t, (g.array @ f.array) % t.modulus if t.rank else g.array)


def is_automorphism(f: Endomorphism) -> bool:
    return len(np.unique(f.perm)) == f.owner.order


def inverse(f: Endomorphism) -> Endomorphism:
    if not is_automorphism(f):
        raise ValueError("endomorphism is not invertible")
    inv = np.empty_like(f.perm)
    inv[f.perm] = np.arange(f.owner.order)
    return Endomorphism.from_perm(f.owner, inv)


def conjugate(f: Endomorphism, phi: Endomorphism) -> Endomorphism:
    """f phi f^-1."""
    return compose(f, compose(phi, inverse(f)))


# -- automorphism generators ----------------------------------------------------


def _unit_generators(p: int, e: int) -> list[int]:
    q = p**e
    if p == 2:
        return [] if e == 1 else ([3] if e == 2 else [q - 1, 5])
    return [int(primitive_root(q))]


@lru_cache(maxsize=None)
def aut_generators(t: AbelianGroupType) -> tuple[Endomorphism, ...]:
    """Elementary automorphisms: unit scalings, transvections, equal-factor swaps.

    These generate Aut(t).  The classification does not take that on trust: it
    compares the order of the generated group with aut_order before using orbits
    as classes.
    """
    k = t.rank
    out: list[np.ndarray] = []
    for p, sl in t.sylow_slices():
        idx = range(sl.start, sl.stop)
        for i in idx:
            q = t.factors[i]
            e = round(np.log(q) / np.log(p))
            for u in _unit_generators(p, e):
                m = np.eye(k, dtype=np.int64)
                m[i, i] = u
                out.append(m)
        for i in idx:
            for j in idx:
                if i == j:
                    continue
                qi, qj = t.factors[i], t.factors[j]
                m = np.eye(k, dtype=np.int64)
                m[i, j] = qj // gcd(qi, qj)
                out.append(m)
        for i in idx:
            if i + 1 < sl.stop and t.factors[i] == t.factors[i + 1]:
                m = np.eye(k, dtype=np.int64)
                m[[i, i + 1]] = m[[i + 1, i]]
                out.append(m)
    return tuple(Endomorphism.from_array(t, m) for m in out)


def aut_order(t: AbelianGroupType) -> int:
    """|Aut(t)| from the closed form for abelian p-groups, multiplied over primes.

    With exponents e_1 <= ... <= e_n, d_k = max{l : e_l = e_k} and
    c_k = min{l : e_l = e_k}, the p-part contributes
    prod (p^d_k - p^(k-1)) * prod p^(e_j (n - d_j)) * prod p^((e_i - 1)(n - c_i + 1)).
    """
    total = 1
    for p in t.primes:
        e = sorted(t.exponents(p))
        n = len(e)
        d = [max(l for l in range(1, n + 1) if e[l - 1] == ek) for ek in e]
        c = [min(l for l in range(1, n + 1) if e[l - 1] == ek) for ek in e]
        for k in range(1, n + 1):
            total *= p ** d[k - 1] - p ** (k - 1)
            total *= p ** (e[k - 1] * (n - d[k - 1]))
            total *= p ** ((e[k - 1] - 1) * (n - c[k - 1] + 1))
    return total


@lru_cache(maxsize=64)
def _generators_complete(t: AbelianGroupType) -> bool:
    """True when aut_generators(t) provably generate Aut(t) (Schreier-Sims order)."""
    gens = [Permutation(g.perm.tolist()) for g in aut_generators(t)]
    if not gens:
        return aut_order(t) == 1
    return PermutationGroup(gens).order() == aut_order(t)


def random_automorphism(t: AbelianGroupType, seed: int = 0, length: int = 24) -> Endomorphism:
    """Deterministic pseudo-random product of elementary automorphisms."""
    rng = random.Random(seed)
    gens = aut_generators(t)
    f = identity(t)
    if not gens:
        return f
    for _ in range(length):
        f = compose(rng.choice(gens), f)
    return f


# -- involution enumeration -----------------------------------------------------


def _check_budget(t: AbelianGroupType, max_order: int):
    for p, _ in t.sylow_slices():
        tp = t.sylow(p)
        if tp.order > max_order:
            raise BudgetExceeded(
                f"order too large for direct enumeration: {p}-part {tp} has order "
                f"{tp.order} > {max_order}"
            )


def _block_diag(t: AbelianGroupType, blocks: Sequence[np.ndarray]) -> np.ndarray:
    m = np.zeros((t.rank, t.rank), dtype=np.int64)
    for (_, sl), b in zip(t.sylow_slices(), blocks):
        m[sl, sl] = b
    return m


@lru_cache(maxsize=64)
def _p_involution_matrices(tp: AbelianGroupType, node_budget: int | None) -> np.ndarray:
    """(N, k, k) array of all involution matrices of a p-group, in search order."""
    if tp.rank == 0:
        return np.zeros((1, 0, 0), dtype=np.int64)
    g = GroupTable(tp.add_table)
    gens = list(tp.generators)
    k = len(gens)
    # the matrices, their transposed copy and two conjugation buffers stay alive together
    limit = MEMORY_BUDGET // (4 * 8 * k * k + 16 * k)
    chunks, buf, fill, total = [], np.empty((65536, k), dtype=np.int16), 0, 0
    try:
        for img in involution_maps(g, gens, node_budget=node_budget, images_only=True):
            if fill == len(buf):
                chunks.append(buf)
                buf, fill = np.empty_like(buf), 0
            buf[fill] = img
            fill += 1
            total += 1
            if total > limit:
                break
    except BudgetExceeded as exc:
        raise BudgetExceeded(f"{tp}: {exc}") from None
    if total > limit:
        raise BudgetExceeded(
            f"{tp}: more than {limit} involutions; classifying them would exceed "
            f"the memory budget of {MEMORY_BUDGET // 10**6} MB"
        )
    imgs = np.concatenate(chunks + [buf[:fill]]).astype(np.int64)
    mats = tp.coords[imgs]
    mats.setflags(write=False)
    return mats


def involutory_automorphisms(
    t: AbelianGroupType,
    node_budget: int | None = DEFAULT_NODE_BUDGET,
    max_order: int = DEFAULT_MAX_ORDER,
) -> list[Endomorphism]:
    """Every automorphism phi of ``t`` with phi o phi = id."""
    _check_budget(t, max_order)
    parts = [_p_involution_matrices(t.sylow(p), node_budget) for p, _ in t.sylow_slices()]
    return [Endomorphism.from_array(t, _block_diag(t, combo)) for combo in product(*parts)]


# -- invariants -----------------------------------------------------------------


def subgroup_type(t: AbelianGroupType, mask) -> AbelianGroupType:
    """Isomorphism type of the subgroup with membership ``mask``."""
    mask = np.asarray(mask, dtype=bool)
    orders = t.element_orders[mask]
    factors: list[int] = []
    for p in t.primes:
        val = np.zeros(len(orders), dtype=np.int64)
        o = orders.copy()
        while (o % p == 0).any():
            val += o % p == 0
            o = np.where(o % p == 0, o // p, o)
        emax = int(val.max()) if len(val) else 0
        # |S[p^j]| = p^(sum_i min(e_i, j))
        logs = [round(np.log(int((val <= j).sum())) / np.log(p)) for j in range(emax + 1)]
        ge = [logs[j] - logs[j - 1] for j in range(1, emax + 1)]  # #{i : e_i >= j}
        for j in range(1, emax + 1):
            nxt = ge[j] if j < emax else 0
            factors.extend([p**j] * (ge[j - 1] - nxt))
    return AbelianGroupType(tuple(factors))


def _kernel_image_masks(t: AbelianGroupType, perm: np.ndarray):
    idx = np.arange(t.order)
    add, neg = t.add_table, t.neg_perm
    minus = add[perm, neg[idx]]
    plus = add[perm, idx]
    out = []
    for v in (minus, plus):
        ker = v == 0
        im = np.zeros(t.order, dtype=bool)
        im[v] = True
        out.append((ker, im))
    return out


def involution_invariants(phi: Endomorphism) -> tuple[AbelianGroupType, ...]:
    """Types of Ker(phi-1), Ker(phi+1), Im(phi-1), Im(phi+1)."""
    t = phi.owner
    (kmin, imin), (kplus, iplus) = _kernel_image_masks(t, phi.perm)
    return tuple(subgroup_type(t, m) for m in (kmin, kplus, imin, iplus))


def _bucket_key(t: AbelianGroupType, g: GroupTable, perm: np.ndarray):
    from ._search import module_signature

    quad = involution_invariants(Endomorphism.from_perm(t, perm))
    hist = tuple(sorted(_count(module_signature(g, perm)).items()))
    return quad, hist


def _count(items):
    out: dict = {}
    for x in items:
        out[x] = out.get(x, 0) + 1
    return out


def find_conjugator(
    phi: Endomorphism, psi: Endomorphism, node_budget: int | None = DEFAULT_NODE_BUDGET
) -> Endomorphism | None:
    """Automorphism f with psi = f phi f^-1, or None when none exists."""
    _same_owner(phi, psi)
    t = phi.owner
    g = _group_table(t)
    f = find_module_iso(g, phi.perm, g, psi.perm, gens1=list(t.generators), node_budget=node_budget)
    return None if f is None else Endomorphism.from_perm(t, f)


@lru_cache(maxsize=128)
def _group_table(t: AbelianGroupType) -> GroupTable:
    return GroupTable(t.add_table)


# -- classification ---------------------------------------------------------------


def _encode(mats: np.ndarray, t: AbelianGroupType) -> np.ndarray:
    idx = mats @ t.radix  # (N, k) generator images as element indices
    n, k = t.order, t.rank
    if n**k >= 2**63:
        raise BudgetExceeded(f"key space {n}^{k} too large for orbit computation")
    w = n ** np.arange(k, dtype=np.int64)
    return idx @ w


def _sparse_conjugate(T: np.ndarray, S: np.ndarray, Sinv: np.ndarray, mod: np.ndarray) -> np.ndarray:
    """``Sinv @ M @ S`` for a stack stored as (k, k, N), using the sparsity of ``S``."""
    k = S.shape[0]

    def combine(coeffs, parts, m):
        nz = np.flatnonzero(coeffs)
        if len(nz) == 1 and coeffs[nz[0]] == 1:
            return parts(nz[0])
        return sum(int(coeffs[j]) * parts(j) for j in nz) % m

    left = np.empty_like(T)
    for i in range(k):
        left[i] = combine(Sinv[i], lambda j: T[j], mod[:, None])
    out = np.empty_like(T)
    for j in range(k):
        out[:, j] = combine(S[:, j], lambda i: left[:, i], mod[j])
    return out


def _direct_p_classes(tp: AbelianGroupType, node_budget, verify: bool):
    mats = _p_involution_matrices(tp, node_budget)
    N = len(mats)
    if tp.rank == 0:
        return [(mats[0], 1)], 1
    keys = _encode(mats, tp)
    order = np.argsort(keys, kind="stable")
    skeys = keys[order]
    rows, cols = [], []
    mod = tp.modulus
    stacked = np.ascontiguousarray(mats.transpose(1, 2, 0))
    weights = np.outer(tp.order ** np.arange(tp.rank, dtype=np.int64), tp.radix)
    for s in aut_generators(tp):
        conj = _sparse_conjugate(stacked, s.array, inverse(s).array, mod)
        ck = np.tensordot(weights, conj, axes=2)
        pos = np.searchsorted(skeys, ck)
        if (pos >= N).any() or not np.array_equal(skeys[np.minimum(pos, N - 1)], ck):
            raise AssertionError("conjugate of an involution missing from the enumeration")
        rows.append(np.arange(N))
        cols.append(order[pos])
    if rows:
        r, c = np.concatenate(rows), np.concatenate(cols)
        graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(N, N))
        ncomp, labels = connected_components(graph, directed=True, connection="weak")
    else:
        ncomp, labels = N, np.arange(N)
    first = np.full(ncomp, N, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(N))
    sizes = np.bincount(labels, minlength=ncomp)
    classes = [[int(first[c]), int(sizes[c])] for c in range(ncomp)]

    # orbits of the generated subgroup are conjugacy classes once that subgroup
    # is all of Aut; otherwise fall back to pairwise conjugator searches
    if verify and len(classes) > 1 and not _generators_complete(tp):
        log.warning("generators of Aut(%s) are incomplete; merging orbits by search", tp)
        classes = _merge_conjugate(tp, mats, classes, node_budget)

    def nice(c):
        img = mats[c[0]]
        moved = int((img != np.eye(tp.rank, dtype=np.int64)).sum())
        return (moved, c[0])

    classes.sort(key=nice)
    return [(mats[i], size) for i, size in classes], N


def _merge_conjugate(tp: AbelianGroupType, mats: np.ndarray, classes: list[list[int]], node_budget=None):
    g = _group_table(tp)
    gens = list(tp.generators)
    # one allowance for the whole merge, so many colliding buckets cannot add up
    budget = _Budget(node_budget, f"{tp}: orbits share invariants and the conjugator search")
    buckets: dict = {}
    for c in classes:
        perm = Endomorphism.from_array(tp, mats[c[0]]).perm
        buckets.setdefault(_bucket_key(tp, g, perm), []).append(c)
    merged = []
    for bucket in buckets.values():
        kept: list[list[int]] = []
        for c in bucket:
            phi = Endomorphism.from_array(tp, mats[c[0]]).perm
            for k in kept:
                psi = Endomorphism.from_array(tp, mats[k[0]]).perm
                if find_module_iso(g, psi, g, phi, gens1=gens, budget=budget) is not None:
                    log.warning("orbits of %s merged by conjugator search", tp)
                    k[1] += c[1]
                    break
            else:
                kept.append(c)
        merged.extend(kept)
    return merged


def _fast_applicable(tp: AbelianGroupType) -> bool:
    if tp.rank == 0:
        return False
    p = tp.primes[0]
    return p != 2 or all(q == 2 for q in tp.factors)


def _fast_p_classes(tp: AbelianGroupType):
    """Representatives from the validated closed-form class invariants."""
    p, k = tp.primes[0], tp.rank
    reps = []
    if p != 2:
        # one class per splitting of the factor multiset into (+1, -1) eigen-parts
        groups: list[list[int]] = []
        for i, q in enumerate(tp.factors):
            if groups and tp.factors[groups[-1][0]] == q:
                groups[-1].append(i)
            else:
                groups.append([i])
        for minus_counts in product(*(range(len(gr) + 1) for gr in groups)):
            m = np.eye(k, dtype=np.int64)
            for gr, c in zip(groups, minus_counts):
                for i in gr[len(gr) - c:]:
                    m[i, i] = tp.factors[i] - 1
            reps.append(m)
        reps.sort(key=lambda m: int((m != np.eye(k, dtype=np.int64)).sum()))
    else:
        for r in range(k // 2 + 1):
            m = np.eye(k, dtype=np.int64)
            for i in range(r):
                m[2 * i, 2 * i + 1] = 1
            reps.append(m)
    return [(m, None) for m in reps]


def fast_class_key(phi: Endomorphism):
    """Class label used by the fast paths (eigen-part types, or rank of phi+1)."""
    t = phi.owner
    if t.primes and t.primes[0] == 2:
        (kmin, imin), _ = _kernel_image_masks(t, phi.perm)
        return int(round(np.log2(imin.sum())))
    quad = involution_invariants(phi)
    return quad[0], quad[1]


@lru_cache(maxsize=None)
def validate_fast_paths(max_odd_order: int = 81, max_rank_2: int = 4) -> bool:
    """Check both fast paths against direct classification on their overlap.

    Odd p: the pair of eigen-part types must separate the direct classes and the
    closed-form representatives must hit each class exactly once.  (Z2)^k: same
    with the rank of phi+1.
    """
    targets: list[AbelianGroupType] = []
    for p in (3, 5, 7):
        q = p
        while q <= max_odd_order:
            targets.extend(groups_of_order(q))
            q *= p
    targets.extend(AbelianGroupType((2,) * k) for k in range(1, max_rank_2 + 1))
    for tp in targets:
        direct, _ = _direct_p_classes(tp, DEFAULT_NODE_BUDGET, verify=True)
        dkeys = [fast_class_key(Endomorphism.from_array(tp, m)) for m, _ in direct]
        fkeys = [fast_class_key(Endomorphism.from_array(tp, m)) for m, _ in _fast_p_classes(tp)]
        if len(set(dkeys)) != len(dkeys) or sorted(map(repr, dkeys)) != sorted(map(repr, fkeys)):
            raise AssertionError(f"fast-path class invariant fails on {tp}")
    return True


def classify_involutions(
    t: AbelianGroupType,
    method: str = "auto",
    verify: bool = True,
    node_budget: int | None = DEFAULT_NODE_BUDGET,
    max_order: int = DEFAULT_MAX_ORDER,
) -> InvolutionClassification:
    """Conjugacy classes of involutory automorphisms under Aut(t).

    ``method``: ``"direct"`` (enumerate + orbits), ``"fast"`` (closed-form
    invariants; odd p or elementary abelian 2-groups only) or ``"auto"``
    (fast where applicable and validated, else direct).
    """
    if method not in ("auto", "direct", "fast"):
        raise ValueError(f"unknown method {method!r}")
    per_part = []
    methods = set()
    for p, _ in t.sylow_slices():
        tp = t.sylow(p)
        use_fast = method == "fast" or (method == "auto" and _fast_applicable(tp))
        if use_fast:
            if not _fast_applicable(tp):
                raise ValueError(f"no fast path for {tp}")
            validate_fast_paths()
            per_part.append((_fast_p_classes(tp), None))
            methods.add("fast")
        else:
            if tp.order > max_order:
                raise BudgetExceeded(
                    f"order too large for direct enumeration: {tp} has order {tp.order} > {max_order}"
                )
            per_part.append(_direct_p_classes(tp, node_budget, verify))
            methods.add("direct")
    classes = []
    for combo in product(*(cl for cl, _ in per_part)):
        mats = [m for m, _ in combo]
        sizes = [s for _, s in combo]
        size = None if any(s is None for s in sizes) else int(np.prod(sizes, dtype=np.int64))
        classes.append((Endomorphism.from_array(t, _block_diag(t, mats)), size))
    totals = [n for _, n in per_part]
    total = None if any(n is None for n in totals) else int(np.prod(totals, dtype=np.int64))
    if not t.factors:
        classes, total = [(identity(t), 1)], 1
    return InvolutionClassification(
        t, tuple(classes), total, "+".join(sorted(methods)) or "direct"
    )


def class_index(cl: InvolutionClassification, phi: Endomorphism) -> int:
    """Index of the class of ``cl`` containing ``phi`` (via conjugator search)."""
    if phi.owner != cl.owner:
        raise ValueError("involution of a different group")
    for i, rep in enumerate(cl.representatives):
        if find_conjugator(rep, phi, node_budget=None) is not None:
            return i
    raise ValueError("involution is not conjugate to any representative")
