import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stardec.errors import InputError
from stardec.maxflow import FlowNetwork, check_flow, max_flow, path_network
from stardec.multigraph import complete_multigraph
from stardec.multiset import IntMultiset
from stardec.oracle import naive_max_flow
from stardec.packing import CenterSpec, build_packing_network
from stardec.sampling import random_network

ENGINES = ["dinic", "scipy", "auto"]


@pytest.mark.parametrize("engine", ENGINES)
def test_path_bottleneck(engine):
    net = path_network([3, 1, 5])
    res = max_flow(net, engine)
    assert res.value == 1
    check_flow(net, res)


@pytest.mark.parametrize("engine", ENGINES)
def test_source_without_arcs(engine):
    net = FlowNetwork.from_arcs(4, 0, 3, [(1, 2, 4), (2, 3, 4)])
    res = max_flow(net, engine)
    assert res.value == 0
    assert res.source_side == frozenset({0})


@pytest.mark.parametrize("engine", ENGINES)
def test_k3_packing_network_value(engine):
    spec = CenterSpec((IntMultiset([2]), IntMultiset([1]), IntMultiset()))
    net = build_packing_network(complete_multigraph(1, 3), spec)
    res = max_flow(net, engine)
    assert res.value == 3
    check_flow(net, res)


def test_parallel_arcs_and_loops():
    net = FlowNetwork.from_arcs(3, 0, 2, [(0, 1, 2), (0, 1, 3), (1, 1, 7), (1, 2, 4), (1, 2, 0)])
    for engine in ("dinic", "scipy"):
        res = max_flow(net, engine)
        assert res.value == 4
        check_flow(net, res)


def test_validation():
    with pytest.raises(InputError):
        FlowNetwork.from_arcs(2, 0, 0, [])
    with pytest.raises(InputError):
        FlowNetwork.from_arcs(2, 0, 1, [(0, 1, -1)])
    with pytest.raises(InputError):
        FlowNetwork.from_arcs(2, 0, 1, [(0, 2, 1)])
    with pytest.raises(InputError):
        max_flow(path_network([1]), "bogus")


def test_scipy_rejects_int32_overflow():
    net = path_network([2**31])
    with pytest.raises(InputError):
        max_flow(net, "scipy")
    assert max_flow(net, "auto").value == 2**31


def test_dump_format():
    text = path_network([3, 1]).dump()
    assert text.splitlines() == ["3", "0 2", "0 1 3", "1 2 1"]


def test_thousand_random_networks():
    rng = random.Random(7)
    for _ in range(1000):
        net = random_network(rng)
        ref = naive_max_flow(net)
        for engine in ("dinic", "scipy"):
            res = max_flow(net, engine)
            check_flow(net, res)
            assert res.value == ref == res.cut_capacity(net)


@given(st.integers(2, 9), st.lists(st.tuples(st.integers(0, 8), st.integers(0, 8), st.integers(0, 20)), max_size=40))
def test_engines_agree(n, arcs):
    arcs = [(t % n, h % n, c) for t, h, c in arcs]
    net = FlowNetwork.from_arcs(n, 0, n - 1, arcs)
    a, b = max_flow(net, "dinic"), max_flow(net, "scipy")
    check_flow(net, a)
    check_flow(net, b)
    assert a.value == b.value == naive_max_flow(net)
    assert np.all(a.arc_flows <= net.caps)
