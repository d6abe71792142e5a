import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aggroups import involutions
from aggroups.abelian import AbelianGroupType, format_type, groups_of_order, parse_type
from aggroups.involutions import (
    BudgetExceeded,
    Endomorphism,
    aut_generators,
    aut_order,
    apply,
    class_index,
    classify_involutions,
    compose,
    conjugate,
    find_conjugator,
    identity,
    involution_invariants,
    involutory_automorphisms,
    inverse,
    is_automorphism,
    random_automorphism,
    subgroup_type,
    validate_fast_paths,
)

from conftest import brute_aut, brute_classes, brute_endomorphisms, brute_involutions, hom_entries, small_types

ORACLE_TYPES = small_types(16) + [
    parse_type(s) for s in ("Z3^3", "Z9xZ3", "Z27", "Z5^2", "Z7^2", "Z8xZ4", "Z4^2xZ2", "Z16xZ2", "Z4xZ3^2")
]
ids = format_type


def E(group, matrix):
    t = parse_type(group)
    return Endomorphism(t, tuple(tuple(r) for r in matrix))


def test_apply_examples():
    assert apply(E("Z5", [[4]]), (2,)) == (3,)
    assert apply(E("Z4xZ2", [[3, 0], [0, 1]]), (1, 1)) == (3, 1)
    t = parse_type("Z8xZ2")
    assert all(apply(identity(t), (a, b)) == (a, b) for a in range(8) for b in range(2))


def test_automorphism_examples():
    assert not is_automorphism(E("Z4", [[2]]))
    assert is_automorphism(E("Z5", [[4]]))
    f = E("Z4xZ2", [[1, 1], [2, 1]])
    assert compose(identity(f.owner), f) == f
    assert compose(f, identity(f.owner)) == f


def test_hom_constraint_rejected_with_entry():
    with pytest.raises(ValueError, match=r"entry \(1,0\)"):
        E("Z4xZ2", [[1, 0], [1, 1]])
    # entries are reduced to canonical representatives
    assert E("Z4xZ2", [[5, 3], [2, -1]]).matrix == ((1, 1), (2, 1))


def test_owner_mismatch():
    with pytest.raises(ValueError, match="different groups"):
        compose(identity(parse_type("Z4")), identity(parse_type("Z2^2")))


def _space(t):
    return int(np.prod([len(v) for row in hom_entries(t.factors) for v in row]))


@pytest.mark.parametrize("t", [t for t in small_types(64) if _space(t) <= 5000], ids=ids)
def test_every_hom_matrix_is_additive(t):
    """Oracle matrices satisfy f(a+b) = f(a)+f(b), and the library's element map agrees."""
    mats, perms = brute_endomorphisms(t.factors)
    A = t.add_table
    for m, p in zip(mats, perms):
        f = Endomorphism.from_array(t, m)
        assert np.array_equal(f.perm, p)
        assert np.array_equal(p[A], A[p[:, None], p[None, :]])


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(small_types(64)), st.data())
def test_sampled_endomorphisms_are_additive(t, data):
    m = [[data.draw(st.sampled_from(v)) for v in row] for row in hom_entries(t.factors)]
    f = Endomorphism(t, tuple(map(tuple, m)))
    A = t.add_table
    p = f.perm
    assert np.array_equal(p[A], A[p[:, None], p[None, :]])


@pytest.mark.parametrize("t", ORACLE_TYPES, ids=ids)
def test_involutions_match_oracle(t):
    got = {tuple(f.perm.tolist()) for f in involutory_automorphisms(t)}
    want = {tuple(p) for p in brute_involutions(t.factors).tolist()}
    assert got == want
    assert tuple(range(t.order)) in got
    for f in involutory_automorphisms(t):
        assert is_automorphism(f)
        assert compose(f, f) == identity(t)


def test_involution_examples():
    assert sorted(f.matrix for f in involutory_automorphisms(parse_type("Z5"))) == [((1,),), ((4,),)]
    assert [f.matrix for f in involutory_automorphisms(parse_type("Z2"))] == [((1,),)]
    assert len(involutory_automorphisms(parse_type("Z2^2"))) == 4


@pytest.mark.parametrize("t", ORACLE_TYPES, ids=ids)
def test_classification_matches_full_conjugation(t):
    cl = classify_involutions(t, method="direct")
    assert sorted(size for _, size in cl.classes) == brute_classes(t.factors)
    assert cl.total_involutions == len(brute_involutions(t.factors))
    assert sum(size for _, size in cl.classes) == cl.total_involutions


@pytest.mark.parametrize("t", ORACLE_TYPES, ids=ids)
def test_aut_order_formula(t):
    assert aut_order(t) == len(brute_aut(t.factors))


def test_aut_order_examples():
    assert aut_order(parse_type("Z4^4")) == 2**16 * 20160  # |GL_4(Z/4)|
    assert aut_order(parse_type("Z2^6")) == 20158709760  # |GL_6(2)|
    assert aut_order(parse_type("Z4xZ2xZ9")) == 8 * 6
    assert aut_order(parse_type("Z1")) == 1


def test_generators_certified_up_to_128():
    assert all(involutions._generators_complete(t) for n in range(1, 129) for t in groups_of_order(n))


@pytest.mark.parametrize("group", ["Z4xZ2", "Z2^3", "Z8xZ2", "Z9xZ3"])
def test_merge_fallback_with_missing_generators(group, monkeypatch, caplog):
    """Keep only scalings and swaps: orbits split, and the conjugator merge must rejoin them."""
    t = parse_type(group)
    full = aut_generators(t)
    monomial = tuple(g for g in full if ((g.array != 0).sum(axis=1) == 1).all())
    assert 0 < len(monomial) < len(full)
    monkeypatch.setattr(involutions, "aut_generators", lambda _t: monomial)
    involutions._generators_complete.cache_clear()
    try:
        with caplog.at_level("WARNING", logger="aggroups.involutions"):
            cl = classify_involutions(t, method="direct")
        assert "incomplete" in caplog.text and "merged by conjugator search" in caplog.text
        assert sorted(size for _, size in cl.classes) == brute_classes(t.factors)
    finally:
        involutions._generators_complete.cache_clear()


@pytest.mark.parametrize("t", ORACLE_TYPES, ids=ids)
def test_aut_generators_generate(t):
    """Closure of the elementary generators has the brute-force order of Aut."""
    gens = [g.perm for g in aut_generators(t)]
    start = tuple(range(t.order))
    seen = {start}
    frontier = [np.array(start)]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = g[p]
                key = tuple(q.tolist())
                if key not in seen:
                    seen.add(key)
                    nxt.append(q)
        frontier = nxt
    assert len(seen) == len(brute_aut(t.factors))


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_class_examples_odd(p):
    assert classify_involutions(AbelianGroupType((p, p)), method="direct").count == 3
    for t in (AbelianGroupType((p,)), AbelianGroupType((p * p,))):
        cl = classify_involutions(t, method="direct")
        assert cl.total_involutions == 2
        assert sorted(size for _, size in cl.classes) == [1, 1]
        assert sorted(r.matrix[0][0] for r in cl.representatives) == [1, t.order - 1]


def test_class_example_klein():
    assert classify_involutions(parse_type("Z2^2"), method="direct").count == 2


@pytest.mark.parametrize("k", range(1, 6))
def test_elementary_two_law(k):
    t = AbelianGroupType((2,) * k)
    assert classify_involutions(t, method="direct").count == k // 2 + 1
    assert classify_involutions(t, method="fast").count == k // 2 + 1


def test_fast_paths_validated():
    assert validate_fast_paths() is True


ODD_81 = [t for q in (3, 9, 27, 81, 5, 25, 7, 49) for t in groups_of_order(q)]


@pytest.mark.parametrize("t", ODD_81, ids=ids)
def test_odd_p_decomposition(t):
    """G = Ker(phi-1) (+) Ker(phi+1), and that type pair labels the class exactly."""
    cl = classify_involutions(t, method="direct")
    pairs = [involution_invariants(r)[:2] for r in cl.representatives]
    assert len(set(pairs)) == len(pairs)
    A, neg = t.add_table, t.neg_perm
    x = np.arange(t.order)
    for f in involutory_automorphisms(t):
        p = f.perm
        plus = p == x
        minus = p == neg
        assert plus.sum() * minus.sum() == t.order
        assert (plus & minus).sum() == 1
        hit = A[np.flatnonzero(plus)[:, None], np.flatnonzero(minus)[None, :]]
        assert len(np.unique(hit)) == t.order
        assert involution_invariants(f)[:2] in pairs
    fast = classify_involutions(t, method="fast")
    assert sorted(map(repr, (involution_invariants(r)[:2] for r in fast.representatives))) == sorted(map(repr, pairs))


@pytest.mark.parametrize("group", ["Z4xZ2^2", "Z8xZ2", "Z3^3", "Z4^2", "Z9xZ3", "Z2^4"])
def test_conjugation_closure(group):
    t = parse_type(group)
    cl = classify_involutions(t, method="direct")
    for i, r in enumerate(cl.representatives):
        for seed in range(4):
            f = random_automorphism(t, seed)
            assert class_index(cl, conjugate(f, r)) == i


@pytest.mark.parametrize("group", ["Z4xZ2^2", "Z8xZ4", "Z3^3", "Z2^4", "Z4xZ3^2"])
def test_representatives_pairwise_non_conjugate(group):
    reps = classify_involutions(parse_type(group), method="direct").representatives
    for i, a in enumerate(reps):
        for b in reps[i + 1:]:
            assert find_conjugator(a, b) is None


def test_find_conjugator_witness():
    t = parse_type("Z4xZ2^2")
    for r in classify_involutions(t, method="direct").representatives:
        g = random_automorphism(t, 7)
        psi = conjugate(g, r)
        f = find_conjugator(r, psi)
        assert f is not None and is_automorphism(f)
        assert compose(f, compose(r, inverse(f))) == psi


@pytest.mark.parametrize("group", ["Z1", "Z2", "Z8xZ2", "Z3^2xZ4", "Z27xZ9", "Z2^5"])
def test_random_automorphism(group):
    t = parse_type(group)
    for seed in range(5):
        f = random_automorphism(t, seed)
        assert f == random_automorphism(t, seed)
        assert is_automorphism(f)
        assert compose(f, inverse(f)) == identity(t)
        assert compose(inverse(f), f) == identity(t)


def test_inverse_rejects_singular():
    with pytest.raises(ValueError):
        inverse(E("Z4", [[2]]))


def test_budget_errors():
    with pytest.raises(BudgetExceeded, match="order too large"):
        involutory_automorphisms(parse_type("Z2^10"))
    with pytest.raises(BudgetExceeded, match="order too large"):
        classify_involutions(parse_type("Z4xZ2^7"), method="direct")
    with pytest.raises(BudgetExceeded, match="node budget"):
        involutory_automorphisms(parse_type("Z2^5"), node_budget=50)


def test_memory_budget(monkeypatch):
    t = parse_type("Z4xZ2^3")
    before = classify_involutions(t, method="direct").count
    involutions._p_involution_matrices.cache_clear()
    with monkeypatch.context() as m:
        m.setattr(involutions, "MEMORY_BUDGET", 50_000)
        with pytest.raises(BudgetExceeded, match="Z4xZ2\\^3: more than .* memory budget"):
            classify_involutions(t, method="direct")
    # a failed run leaves nothing stale behind
    assert classify_involutions(t, method="direct").count == before


def test_fast_method_scope():
    with pytest.raises(ValueError, match="no fast path"):
        classify_involutions(parse_type("Z4xZ2"), method="fast")
    # auto mixes fast odd parts with direct 2-parts
    cl = classify_involutions(parse_type("Z4xZ2xZ3^2"))
    assert cl.count == classify_involutions(parse_type("Z4xZ2xZ3^2"), method="direct").count


def test_subgroup_type():
    t = parse_type("Z4xZ2")
    A = t.add_table
    # <(1,0)> is cyclic of order 4, <(2,0),(0,1)> is Klein
    mask = np.zeros(8, dtype=bool)
    mask[[0, 2, 4, 6]] = True
    assert subgroup_type(t, mask) == parse_type("Z4")
    mask = np.zeros(8, dtype=bool)
    mask[[0, 1, 4, 5]] = True
    assert subgroup_type(t, mask) == parse_type("Z2^2")
    assert subgroup_type(t, np.ones(8, dtype=bool)) == t
