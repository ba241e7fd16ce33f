import math
from fractions import Fraction

import pytest

from stardec.decompose import alpha_prime, even_admits, verify
from stardec.errors import DomainError, InputError
from stardec.hardness import (
    SearchMiss,
    ThreePartitionInstance,
    even_constraint_failures,
    even_if_assignment,
    gen_hard_even,
    gen_hard_odd,
    is_prime,
    odd_if_assignment,
    solve_three_partition,
)
from stardec.multigraph import StarPacking, complete_multigraph
from stardec.multiset import IntMultiset
from stardec.packing import pack_with_centers

TP = ThreePartitionInstance((2, 2, 3))


def test_three_partition_validation():
    assert (TP.q, TP.a) == (1, 7)
    with pytest.raises(InputError):
        ThreePartitionInstance((1, 2))
    with pytest.raises(InputError):
        ThreePartitionInstance((2, 2, 9))  # 2 is not above a/4 = 13/4
    with pytest.raises(InputError):
        ThreePartitionInstance.parse("2,x,3")


def test_three_partition_solver():
    assert solve_three_partition(TP) == [(0, 1, 2)]
    tp = ThreePartitionInstance((5, 5, 5, 4, 6, 5))
    sol = solve_three_partition(tp)
    assert sol is not None and all(sum(tp.values[i] for i in t) == tp.a for t in sol)
    no = ThreePartitionInstance((4, 4, 4, 4, 4, 6))  # a = 13; triples sum to 12 or 14
    assert solve_three_partition(no) is None


def test_odd_golden():
    p, inst = gen_hard_odd(3, TP)
    assert (p.n, p.m, p.b) == (162, 121, 26)
    assert inst.sizes == IntMultiset.from_runs([(121, 323)]) + IntMultiset([26, 4, 4, 6])
    assert inst.sizes.sigma() == 39123 == 3 * math.comb(162, 2)
    assert p.B == IntMultiset([26])
    assert Fraction(p.m, p.n - 1) > Fraction(3, 4)


def test_odd_if_direction_packs():
    p, inst = gen_hard_odd(3, TP)
    spec = odd_if_assignment(p, TP, solve_three_partition(TP))
    out = pack_with_centers(complete_multigraph(3, p.n), spec)
    assert isinstance(out, StarPacking) and verify(inst, out)


def test_odd_even_q_half_integer_b():
    tp = ThreePartitionInstance((5, 5, 5, 4, 6, 5))
    p, inst = gen_hard_odd(3, tp)
    assert p.b.denominator == 2
    assert p.B == IntMultiset([math.ceil(p.b), math.floor(p.b)])
    assert inst.sizes.sigma() == 3 * math.comb(p.n, 2)
    assert min(inst.sizes) > tp.q


def test_odd_rejects_even_lambda():
    with pytest.raises(DomainError):
        gen_hard_odd(4, TP)


@pytest.mark.parametrize("lam", [2, 4])
def test_even_instances(lam):
    res = gen_hard_even(lam, TP)
    assert not isinstance(res, SearchMiss)
    p, inst = res
    bad, c, b = even_constraint_failures(lam, TP, p.n, p.m, p.r)
    assert bad == [] and (c, b) == (p.c, p.b)
    ell = lam // 2
    identity = p.m * p.r + c * ((ell + 1) * p.n - 2 * p.r - TP.q) + b * TP.q + (ell + 1) * TP.q ** 2 * TP.a
    assert inst.sizes.sigma() == identity == lam * math.comb(p.n, 2)
    assert not even_admits(lam, p.m, p.n - 1)
    assert p.m / (p.n - 1) > alpha_prime(lam).value
    assert is_prime(p.p) and p.r == p.p * p.x and (p.n - TP.q) % p.x == 0
    assert 2 * p.p ** 2 * p.x ** 2 >= (p.n - 1) ** 2
    spec = even_if_assignment(p, TP, solve_three_partition(TP))
    out = pack_with_centers(complete_multigraph(lam, p.n), spec)
    assert isinstance(out, StarPacking) and verify(inst, out)


def test_even_search_miss_reports_constraint():
    res = gen_hard_even(2, TP, search_limit=40)
    assert isinstance(res, SearchMiss)
    assert res.limit == 40 and res.constraint


def test_is_prime():
    assert [k for k in range(30) if is_prime(k)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
