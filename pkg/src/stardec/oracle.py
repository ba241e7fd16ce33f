"""Brute-force ground truth for tiny instances.

Nothing here touches the flow-network code: packings are found by
backtracking over leaf choices, the restriction-function minimum by plain
enumeration, tournaments by listing every orientation, and max flow by a
dense shortest-augmenting-path loop. Each entry point refuses inputs beyond
its configured caps.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import comb, prod
from typing import Any

import numpy as np

from .decompose import DecompInstance
from .errors import Refused
from .maxflow import FlowNetwork
from .multigraph import Multigraph, Star
from .packing import CenterSpec
from .tournament import Tournament, TournamentSpec


@dataclass(frozen=True)
class OracleCaps:
    pack_sigma: int = 40
    pack_n: int = 6
    pack_mu: int = 3
    decompose_edges: int = 40
    decompose_n: int = 6
    tournament_space: int = 10**6
    delta_functions: int = 200_000


DEFAULT_CAPS = OracleCaps()


@dataclass(frozen=True)
class OracleResult:
    feasible: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.feasible


# -- packing --------------------------------------------------------------------


def _search(n: int, remaining: list[int], stars: list[tuple[int | None, int]]) -> list[Star] | None:
    """Place ``stars`` (centre or None for free, size) on the pair multiplicities ``remaining``.

    ``remaining`` is indexed by ``u * n + v`` for ``u < v``. Failed states are memoised.
    """
    failed: set[tuple] = set()
    chosen: list[Star] = []
    need_after = [0] * (len(stars) + 1)
    for i in range(len(stars) - 1, -1, -1):
        need_after[i] = need_after[i + 1] + stars[i][1]

    def key(u: int, v: int) -> int:
        return u * n + v if u < v else v * n + u

    def rec(i: int, prev: tuple | None) -> bool:
        if i == len(stars):
            return True
        if need_after[i] > sum(remaining):
            return False
        state = (i, prev if i and stars[i] == stars[i - 1] else None, tuple(remaining))
        if state in failed:
            return False
        centre, size = stars[i]
        centres = range(n) if centre is None else (centre,)
        for c in centres:
            open_leaves = [w for w in range(n) if w != c and remaining[key(c, w)] > 0]
            for leaves in combinations(open_leaves, size):
                here = (c, leaves)
                # identical consecutive stars take nondecreasing choices
                if i and stars[i] == stars[i - 1] and prev is not None and here < prev:
                    continue
                for w in leaves:
                    remaining[key(c, w)] -= 1
                chosen.append(Star(c, leaves))
                ok = rec(i + 1, here)
                for w in leaves:
                    remaining[key(c, w)] += 1
                if ok:
                    return True
                chosen.pop()
        failed.add(state)
        return False

    return list(chosen) if rec(0, None) else None


def _pair_vector(g: Multigraph) -> list[int]:
    n = g.n
    rem = [0] * (n * n)
    for (u, v), m in g.pairs():
        rem[u * n + v] = m
    return rem


def oracle_pack(g: Multigraph, spec: CenterSpec, caps: OracleCaps = DEFAULT_CAPS) -> OracleResult:
    """Exact packing feasibility by backtracking over each star's leaf set."""
    if spec.n != g.n:
        raise Refused(f"spec has {spec.n} vertices but the host has {g.n}")
    if g.n > caps.pack_n:
        raise Refused(f"n={g.n} exceeds the oracle cap {caps.pack_n}")
    if spec.total() > caps.pack_sigma:
        raise Refused(f"total size {spec.total()} exceeds the oracle cap {caps.pack_sigma}")
    if any(m > caps.pack_mu for _, m in g.pairs()):
        raise Refused(f"multiplicity exceeds the oracle cap {caps.pack_mu}")
    stars = [(v, s) for v in range(g.n) for s in sorted(spec[v], reverse=True)]
    stars.sort(key=lambda t: (-t[1], t[0]))
    found = _search(g.n, _pair_vector(g), stars)
    return OracleResult(found is not None, found)


def min_delta(g: Multigraph, spec: CenterSpec, caps: OracleCaps = DEFAULT_CAPS) -> tuple[int, tuple[int, ...]]:
    """Minimum of ``Delta+_f - Delta-_f`` over every restriction function, and the first minimiser."""
    n = g.n
    if spec.n != n:
        raise Refused(f"spec has {spec.n} vertices but the host has {n}")
    dims = [len(spec[v]) + 1 for v in range(n)]
    count = prod(dims)
    if count > caps.delta_functions:
        raise Refused(f"{count} restriction functions exceed the oracle cap {caps.delta_functions}")
    F = np.indices(dims).reshape(n, -1).T if n else np.zeros((1, 0), dtype=np.int64)
    total = np.zeros(len(F), dtype=np.int64)
    for v in range(n):
        top = np.concatenate([[0], np.cumsum(sorted(spec[v], reverse=True))]).astype(np.int64)
        total -= top[F[:, v]]
    for (u, v), m in g.pairs():
        if m:
            total += np.minimum(m, F[:, u] + F[:, v])
    i = int(np.argmin(total))
    return int(total[i]), tuple(int(x) for x in F[i])


# -- decomposition --------------------------------------------------------------


def oracle_decompose(inst: DecompInstance, caps: OracleCaps = DEFAULT_CAPS) -> OracleResult:
    """Exact decision for the free-centre problem: each star picks a centre and leaves."""
    lam, n = inst.lam, inst.n
    edges = lam * comb(n, 2)
    if n > caps.decompose_n:
        raise Refused(f"n={n} exceeds the oracle cap {caps.decompose_n}")
    if edges > caps.decompose_edges:
        raise Refused(f"{edges} edges exceed the oracle cap {caps.decompose_edges}")
    if inst.sizes.sigma() != edges:
        return OracleResult(False)
    rem = [0] * (n * n)
    for u, v in combinations(range(n), 2):
        rem[u * n + v] = lam
    stars = [(None, s) for s in sorted(inst.sizes, reverse=True)]
    found = _search(n, rem, stars)
    return OracleResult(found is not None, found)


# -- tournaments ----------------------------------------------------------------


@lru_cache(maxsize=32)
def _orientation_table(lam: int, n: int) -> dict[tuple[int, ...], list[tuple[tuple[int, ...], tuple[int, ...]]]]:
    """Out-degree vector -> [(out-neighbour counts, one orientation)] over all orientations."""
    pairs = list(combinations(range(n), 2))
    table: dict[tuple[int, ...], dict[tuple[int, ...], tuple[int, ...]]] = {}
    for choice in product(range(lam + 1), repeat=len(pairs)):
        deg = [0] * n
        nb = [0] * n
        for (u, v), x in zip(pairs, choice):
            deg[u] += x
            deg[v] += lam - x
            nb[u] += x > 0
            nb[v] += x < lam
        table.setdefault(tuple(deg), {}).setdefault(tuple(nb), choice)
    return {d: list(rows.items()) for d, rows in table.items()}


def oracle_tournament(spec: TournamentSpec, caps: OracleCaps = DEFAULT_CAPS) -> OracleResult:
    """Exact feasibility by listing every orientation of ``lam K_n``."""
    lam, n = spec.lam, spec.n
    space = (lam + 1) ** comb(n, 2)
    if space > caps.tournament_space:
        raise Refused(f"{space} orientations exceed the oracle cap {caps.tournament_space}")
    for nb, choice in _orientation_table(lam, n).get(tuple(spec.a), ()):
        if all(x >= y for x, y in zip(nb, spec.b)):
            out = [[0] * n for _ in range(n)]
            for (u, v), x in zip(combinations(range(n), 2), choice):
                out[u][v] = x
                out[v][u] = lam - x
            return OracleResult(True, Tournament(lam, tuple(tuple(r) for r in out)))
    return OracleResult(False)


# -- max flow -------------------------------------------------------------------


def naive_max_flow(net: FlowNetwork) -> int:
    """Shortest augmenting paths on a dense residual matrix."""
    n = net.node_count
    cap = [[0] * n for _ in range(n)]
    for t, h, c in net.arcs:
        if t != h:
            cap[t][h] += c
    s, t = net.source, net.sink
    value = 0
    while True:
        parent = [-1] * n
        parent[s] = s
        queue = deque([s])
        while queue and parent[t] < 0:
            u = queue.popleft()
            for v in range(n):
                if parent[v] < 0 and cap[u][v] > 0:
                    parent[v] = u
                    queue.append(v)
        if parent[t] < 0:
            return value
        push = None
        v = t
        while v != s:
            u = parent[v]
            push = cap[u][v] if push is None else min(push, cap[u][v])
            v = u
        v = t
        while v != s:
            u = parent[v]
            cap[u][v] -= push
            cap[v][u] += push
            v = u
        value += push


def oracle_summary(result: OracleResult) -> dict:
    w = result.witness
    out: dict[str, Any] = {"feasible": result.feasible}
    if isinstance(w, list):
        out["stars"] = [s.to_json() for s in sorted(w)]
    elif isinstance(w, Tournament):
        out["out"] = [list(r) for r in w.out]
    return out


def orientation_count(lam: int, n: int) -> int:
    return (lam + 1) ** comb(n, 2)

