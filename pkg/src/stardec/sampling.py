"""Seeded random instance generators shared by tests, scripts and the acceptance suite."""

from __future__ import annotations

import random
from itertools import combinations
from math import prod

from .decompose import DecompInstance, Threshold
from .maxflow import FlowNetwork
from .multigraph import Multigraph
from .multiset import IntMultiset
from .packing import CenterSpec


def random_network(rng: random.Random, max_nodes: int = 12, max_arcs: int = 40, max_cap: int = 9) -> FlowNetwork:
    """Arbitrary digraph, parallel arcs and self-loops allowed, zero capacities included."""
    n = rng.randint(2, max_nodes)
    arcs = [(rng.randrange(n), rng.randrange(n), rng.randint(0, max_cap)) for _ in range(rng.randint(0, max_arcs))]
    s, t = rng.sample(range(n), 2)
    return FlowNetwork.from_arcs(n, s, t, arcs)


def random_multigraph(rng: random.Random, n: int, max_mu: int) -> Multigraph:
    return Multigraph(n, {(u, v): rng.randint(0, max_mu) for u, v in combinations(range(n), 2)})


def random_spec(rng: random.Random, n: int, max_total: int, max_size: int | None = None,
                max_functions: int | None = None) -> CenterSpec:
    """Sizes in ``1..max_size`` spread over random centres, total at most ``max_total``."""
    max_size = max(1, n - 1) if max_size is None else max_size
    target = rng.randint(0, max_total)
    bins: list[list[int]] = [[] for _ in range(n)]
    total = 0
    while True:
        s = rng.randint(1, max_size)
        if total + s > target:
            break
        v = rng.randrange(n)
        if max_functions is not None and prod(len(b) + 1 + (i == v) for i, b in enumerate(bins)) > max_functions:
            break
        bins[v].append(s)
        total += s
    return CenterSpec(tuple(IntMultiset(b) for b in bins))


def random_below_threshold(rng: random.Random, lam: int, n: int) -> DecompInstance:
    """Sizes at most the constructive bound, summing to ``lam * C(n, 2)``.

    A random lower end skews draws toward small, mixed or near-bound sizes.
    """
    m = Threshold(lam).bound(n)
    total = lam * (n * (n - 1) // 2)
    lo = rng.choice([1, max(1, m // 2), max(1, m - 3), m])
    out = []
    while total > 0:
        x = min(total, rng.randint(lo, m))
        out.append(x)
        total -= x
    return DecompInstance(lam, n, IntMultiset(out))
