import itertools

import numpy as np
import pytest

from aggroups.bruteforce import HARD_CAP, find_all, labeled_models, verify_representation
from aggroups.enumeration import count
from aggroups.table import LAWS, check, construct


def brute_iso(a, b):
    A, B = a.table, b.table
    for f in itertools.permutations(range(a.n)):
        f = np.array(f)
        if (f[A] == B[f[:, None], f[None, :]]).all():
            return True
    return False


@pytest.mark.parametrize("n", range(1, 7))
def test_class_counts_match_enumeration(n):
    reps, stats = find_all(n)
    assert len(reps) == stats.classes == count(n).count
    assert stats.classes <= stats.labeled
    assert stats.order == n


def test_examples():
    assert find_all(1)[1].classes == 1
    assert find_all(3)[1].classes == 2
    assert find_all(6)[1].classes == 2


@pytest.mark.parametrize("n", range(1, 7))
def test_emitted_tables_pass_every_law(n):
    for t in find_all(n)[0]:
        assert all(check(t, law).holds for law in LAWS)


@pytest.mark.parametrize("n", range(1, 7))
def test_representatives_pairwise_non_isomorphic(n):
    reps, _ = find_all(n)
    for a, b in itertools.combinations(reps, 2):
        assert not brute_iso(a, b)


@pytest.mark.parametrize("n", range(1, 7))
def test_labeled_models_are_all_relabelings(n):
    """Every relabeling fixing 0 of every AG(G, phi) of order n, and nothing else."""
    want = set()
    for r in count(n, reps=True).representatives:
        T = construct(r)
        for rest in itertools.permutations(range(1, n)):
            want.add(T.relabel((0,) + rest))
    got = labeled_models(n)
    assert len(got) == len(set(got))
    assert set(got) == want


@pytest.mark.parametrize("n", range(1, 5))
def test_latin_pruning_loses_nothing(n):
    assert labeled_models(n, latin_pruning=False) == labeled_models(n)
    assert find_all(n, latin_pruning=False)[1].classes == find_all(n)[1].classes


def test_deterministic_and_worker_independent():
    a = [find_all(5)[1].to_dict() for _ in range(2)]
    assert a[0] == a[1]
    assert "seconds" not in a[0] and "seconds" in find_all(5)[1].to_dict(timing=True)
    reps1, s1 = find_all(6, jobs=1)
    reps2, s2 = find_all(6, jobs=2)
    assert s1.to_dict() == s2.to_dict()
    assert reps1 == reps2


def test_caps():
    with pytest.raises(ValueError, match="cap"):
        find_all(7)
    with pytest.raises(ValueError, match="cap"):
        find_all(HARD_CAP + 1, cap=HARD_CAP + 1)
    with pytest.raises(ValueError, match="latin"):
        find_all(5, latin_pruning=False)
    with pytest.raises(ValueError):
        find_all(0)


def test_order_seven_behind_flag():
    reps, stats = find_all(7, cap=7)
    assert stats.classes == count(7).count == 2


@pytest.mark.parametrize("n", [2, 4, 5])
def test_verify_representation_examples(n):
    assert verify_representation(n)
