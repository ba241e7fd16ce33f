import random
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stardec.errors import DomainError, Infeasible, StructuralError
from stardec.golden import PACK_2K10_F, pack_2k10
from stardec.multigraph import Multigraph, Star, StarPacking, complete_multigraph, coverage_check
from stardec.multiset import IntMultiset
from stardec.oracle import min_delta, oracle_pack
from stardec.packing import (
    CenterSpec,
    Certificate,
    RestrictionFunction,
    build_packing_network,
    delta_eval,
    multistar_decompose,
    multistar_feasible,
    pack_with_centers,
)
from stardec.sampling import random_multigraph, random_spec

K3 = complete_multigraph(1, 3)
K3_SPEC = CenterSpec.from_mapping(3, {0: [2], 1: [1]})


def test_delta_eval_zero_function():
    g, spec = pack_2k10()
    r = delta_eval(g, spec, [0] * 10)
    assert (r.delta_minus, r.delta_plus, r.delta) == (0, 0, 0)


def test_delta_eval_2k10_group_function():
    g, spec = pack_2k10()
    r = delta_eval(g, spec, PACK_2K10_F)
    assert (r.delta_minus, r.delta_plus, r.delta) == (64, 62, -2)


def test_delta_eval_k3():
    r = delta_eval(K3, K3_SPEC, (1, 1, 0))
    assert r.delta_minus == 3 and r.delta >= 0
    assert min_delta(K3, K3_SPEC)[0] == 0


def test_delta_eval_rejects_out_of_range_f():
    with pytest.raises(DomainError):
        delta_eval(K3, K3_SPEC, (2, 0, 0))
    with pytest.raises(DomainError):
        delta_eval(K3, K3_SPEC, (1, 1))


def test_network_size_k3():
    net = build_packing_network(K3, K3_SPEC)
    assert net.node_count == 7 and net.arc_count == 9


def test_network_size_empty_spec():
    net = build_packing_network(K3, CenterSpec.empty(3))
    assert net.node_count == 2 + 3


def test_network_size_2k10():
    g, spec = pack_2k10()
    net = build_packing_network(g, spec)
    # one s-node per star (sum of |M_v| = 16), one t-node per pair
    assert spec.star_count() == 16
    assert net.node_count == 2 + 16 + 45


def test_pack_k3():
    out = pack_with_centers(K3, K3_SPEC)
    assert isinstance(out, StarPacking)
    assert sorted(out.stars) == [Star(0, (1, 2)), Star(1, (2,))]


def test_pack_empty():
    out = pack_with_centers(K3, CenterSpec.empty(3))
    assert isinstance(out, StarPacking) and len(out) == 0


def test_pack_2k10_certificate():
    g, spec = pack_2k10()
    out = pack_with_centers(g, spec)
    assert isinstance(out, Certificate)
    assert out.flow_value < out.demand == 88
    assert delta_eval(g, spec, out.f).delta == out.delta < 0


def test_spec_host_mismatch():
    with pytest.raises(StructuralError):
        pack_with_centers(K3, CenterSpec.empty(4))


def test_multistar_feasibility_examples():
    assert multistar_feasible([2, 2], IntMultiset([2, 2]))
    assert not multistar_feasible([3], IntMultiset([2]))
    assert multistar_feasible([], IntMultiset())


def test_multistar_decompose_forced():
    stars = multistar_decompose(0, {1: 2, 2: 2}, IntMultiset([2, 2]))
    assert sorted(stars) == [Star(0, (1, 2)), Star(0, (1, 2))]


def test_multistar_decompose_split():
    stars = multistar_decompose(0, {1: 1, 2: 1, 3: 1}, IntMultiset([2, 1]))
    assert sorted(s.size for s in stars) == [1, 2]
    assert Counter(w for s in stars for w in s.leaves) == Counter({1: 1, 2: 1, 3: 1})


def test_multistar_decompose_infeasible():
    with pytest.raises(Infeasible):
        multistar_decompose(0, {1: 3}, IntMultiset([2, 1]))


@given(st.integers(0, 10**6))
def test_pack_matches_oracles(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    g = random_multigraph(rng, n, 2)
    spec = random_spec(rng, n, 14)
    out = pack_with_centers(g, spec)
    feasible = isinstance(out, StarPacking)
    assert feasible == oracle_pack(g, spec).feasible == (min_delta(g, spec)[0] >= 0)
    if feasible:
        assert coverage_check(out, exact=False)
        for v in range(n):
            assert IntMultiset(s.size for s in out.stars_at(v)) == spec[v]
    else:
        assert delta_eval(g, spec, out.f).delta < 0
        out.f.check(spec)


@given(st.lists(st.integers(1, 3), min_size=0, max_size=6), st.lists(st.integers(1, 6), max_size=6))
def test_multistar_condition_matches_flow(mults, sizes):
    M = IntMultiset(sizes)
    leaf_mults = {i + 1: m for i, m in enumerate(mults)}
    if sum(mults) != M.sigma():
        return
    expect = multistar_feasible(mults, M)
    try:
        stars = multistar_decompose(0, leaf_mults, M)
    except Infeasible:
        assert not expect
    else:
        assert expect
        assert Counter(w for s in stars for w in s.leaves) == Counter(leaf_mults)
        assert IntMultiset(s.size for s in stars) == M


def test_restriction_function_validation():
    with pytest.raises(DomainError):
        RestrictionFunction((1, 2.5))
    f = RestrictionFunction((1, 0, 0))
    f.check(K3_SPEC)
    assert f.to_json() == {"0": 1, "1": 0, "2": 0}


def test_general_multigraph_packing():
    g = Multigraph(4, {(0, 1): 2, (0, 2): 1, (2, 3): 3})
    spec = CenterSpec.from_mapping(4, {0: [2, 1], 3: [1]})
    out = pack_with_centers(g, spec)
    assert isinstance(out, StarPacking) and coverage_check(out, exact=False)
