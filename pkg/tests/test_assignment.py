import random

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from stardec.assignment import (
    Assignment,
    compress_all,
    compress_even,
    compress_odd,
    compression_ok,
    e2_violation,
    equitable_assign,
    equitable_violations,
    greedy_assign,
    greedy_violations,
    merge_small,
    round_robin_assign,
    split_back,
)
from stardec.decompose import Threshold
from stardec.errors import DomainError, StructuralError
from stardec.golden import decomp_4k100
from stardec.multigraph import Star
from stardec.multiset import IntMultiset
from stardec.sampling import random_below_threshold

I = IntMultiset
size_lists = st.lists(st.integers(1, 40), min_size=1, max_size=40)


def test_merge_examples():
    plan = merge_small(I([1, 1, 1]), 3)
    assert plan.final_sizes == I([3])
    assert plan.merges == ((2, 1, 1), (3, 2, 1))
    assert merge_small(I([5, 5]), 6).final_sizes == I([5, 5])
    assert merge_small(I([2]), 4).final_sizes == I([2])


def test_merge_rejects_oversize():
    with pytest.raises(DomainError):
        merge_small(I([7]), 6)


def test_split_back_examples():
    plan = merge_small(I([1, 1, 1]), 3)
    out = split_back([Star(0, (1, 2, 3))], plan)
    assert sorted(out) == [Star(0, (1,)), Star(0, (2,)), Star(0, (3,))]
    ident = merge_small(I([5, 5]), 6)
    stars = [Star(0, (1, 2, 3, 4, 5)), Star(1, (2, 3, 4, 5, 6))]
    assert split_back(stars, ident) == stars


def test_split_back_seven():
    plan = merge_small(I([4, 3]), 7)
    assert plan.merges == ((7, 4, 3),)
    out = split_back([Star(0, tuple(range(1, 8)))], plan)
    assert sorted(s.size for s in out) == [3, 4]
    leaves = [w for s in out for w in s.leaves]
    assert sorted(leaves) == list(range(1, 8))


def test_split_back_size_mismatch():
    with pytest.raises(StructuralError):
        split_back([Star(0, (1,))], merge_small(I([2]), 4))


@given(size_lists, st.integers(40, 80))
def test_merge_plan_replays(xs, m):
    plan = merge_small(I(xs), m)
    assert plan.replay_reverse() == I(xs)
    assert plan.final_sizes.sigma() == sum(xs)
    assert plan.final_sizes.max() <= m
    # no two remaining sizes could still be merged
    fin = sorted(plan.final_sizes)
    assert len(fin) < 2 or fin[0] + fin[1] > m


def test_greedy_examples():
    a = greedy_assign(I([9, 8, 7, 6, 5]), 3)
    assert a.sets == (I([9]), I([8, 5]), I([7, 6]))
    assert greedy_assign(I([4]), 2).sets == (I([4]), I())


@given(size_lists, st.integers(1, 12))
def test_greedy_properties(xs, n):
    # preconditions: sizes at most m, no two summing to m or less, m > n/2
    m = max(xs)
    assume(2 * m > n)
    sizes = merge_small(I(xs), m).final_sizes
    a = greedy_assign(sizes, n)
    assert a.union() == sizes
    assert greedy_violations(a) == []
    sums = a.sums()
    for v, M in enumerate(a.sets):
        if M:
            assert (sums[v] <= sums + M.min()).all()


def test_equitable_examples():
    a = equitable_assign(I([3, 3, 2, 2]), 2)
    assert sorted(a.sets) == [I([3, 2]), I([3, 2])]
    assert e2_violation(a) is None
    assert equitable_assign(I([5]), 1).sets == (I([5]),)


def test_equitable_4k100():
    inst = decomp_4k100()
    m = Threshold(4).bound(100)
    a = equitable_assign(merge_small(inst.sizes, m).final_sizes, 100)
    assert equitable_violations(a, m) == []


@given(size_lists, st.integers(1, 10), st.integers(0, 2**32))
def test_equitable_e1_e2_any_start(xs, n, seed):
    rng = random.Random(seed)
    values = list(xs)
    rng.shuffle(values)
    start = round_robin_assign(I(values), n)
    a = equitable_assign(I(xs), n, start)
    assert a.union() == I(xs)
    bad = equitable_violations(a, max(xs))
    assert "E1" not in bad and "E2" not in bad
    energy = lambda b: int((b.sums() ** 2).sum())
    assert energy(a) <= energy(start)


def test_e2_scanner_finds_crossed_pair():
    # sums 9 and 4 differ by 5 > 4 - 3
    a = Assignment((I([5, 4]), I([3, 1])))
    assert e2_violation(a) == (1, 0, 3, 4)
    assert "E2" in equitable_violations(a, 5)
    # sums 6 and 4 differ by 2 = 5 - 3, the smallest crossed gap
    assert e2_violation(Assignment((I([5, 1]), I([3, 1])))) is None


def test_compress_odd_case2_example():
    M = I([121, 26, 4, 4, 6])
    out = compress_odd(M, 121, 1, case1=False)
    assert out == I([121, 26, 14])
    assert compression_ok(M, out, 121)


def test_compress_even_case2_example():
    M = I([90, 73, 72])
    out = compress_even(M, 90, 2, case1=False)
    assert out == M


def test_compress_case1_fixed_point():
    M = I([10, 10, 10, 4])
    assert compress_odd(M, 10, 1, case1=True, k=3) == M


def test_compress_case2_tail_omitted():
    # sigma = (ell-1)m + y exactly leaves no second tail element
    M = I([90, 50])
    out = compress_even(M, 90, 2, case1=False)
    assert out == I([90, 50])


@given(st.integers(0, 10**6), st.integers(2, 7))
def test_compression_dominates_on_pipeline_assignments(seed, lam):
    rng = random.Random(seed)
    inst = random_below_threshold(rng, lam, rng.randint(5, 40))
    m = Threshold(lam).bound(inst.n)
    fin = merge_small(inst.sizes, m).final_sizes
    a = greedy_assign(fin, inst.n) if lam % 2 else equitable_assign(fin, inst.n)
    plan = compress_all(a, m, lam)
    for M, S in zip(a.sets, plan.sets):
        assert S.sigma() == M.sigma() and (not S or S.max() <= m)
        for i in range(1, len(S) + 1):
            assert S.sigma_top(i) >= M.sigma_top(min(i, len(M)))


@given(st.lists(st.integers(1, 30), min_size=1, max_size=8), st.integers(30, 40), st.integers(1, 3))
def test_compress_odd_case2_random(xs, m, ell):
    M = I(xs)
    assume(ell * m < M.sigma() <= (ell + 2) * m)
    assume(len(M) >= ell + 1)
    out = compress_odd(M, m, ell, case1=False)
    assert out.sigma() == M.sigma() and out.max() <= m
