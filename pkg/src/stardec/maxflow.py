"""Exact integer maximum flow and minimum cut.

Two engines share one contract. ``"dinic"`` is a pure-Python blocking-flow
solver over adjacency-indexed residual arcs; ``"scipy"`` hands the network
to :func:`scipy.sparse.csgraph.maximum_flow` (also Dinic) and maps the
result back onto the original, possibly parallel, arcs. ``"auto"`` picks
the pure-Python engine for small networks and scipy for large ones. The
choice depends only on the input, so results are reproducible.

In both cases the minimum cut is the set of nodes reachable from the source
in the final residual graph.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import breadth_first_order, maximum_flow

from .errors import InputError, InvariantBreach

#: Networks with more arcs than this go to the scipy engine under "auto".
AUTO_SCIPY_ARCS = 300

_INT32_MAX = 2**31 - 1


@dataclass(frozen=True, eq=False)
class FlowNetwork:
    node_count: int
    source: int
    sink: int
    tails: np.ndarray
    heads: np.ndarray
    caps: np.ndarray

    def __post_init__(self):
        tails = np.ascontiguousarray(self.tails, dtype=np.int64)
        heads = np.ascontiguousarray(self.heads, dtype=np.int64)
        caps = np.ascontiguousarray(self.caps, dtype=np.int64)
        object.__setattr__(self, "tails", tails)
        object.__setattr__(self, "heads", heads)
        object.__setattr__(self, "caps", caps)
        n = self.node_count
        if not (len(tails) == len(heads) == len(caps)):
            raise InputError("arc arrays differ in length")
        if self.source == self.sink:
            raise InputError("source and sink coincide")
        if not (0 <= self.source < n and 0 <= self.sink < n):
            raise InputError("source or sink outside the node range")
        if len(tails) and (tails.min() < 0 or heads.min() < 0 or tails.max() >= n or heads.max() >= n):
            raise InputError("arc endpoint outside the node range")
        if len(caps) and caps.min() < 0:
            raise InputError("negative arc capacity")

    @classmethod
    def from_arcs(cls, node_count: int, source: int, sink: int,
                  arcs: Iterable[tuple[int, int, int]]) -> "FlowNetwork":
        arcs = list(arcs)
        cols = list(zip(*arcs)) if arcs else ([], [], [])
        return cls(node_count, source, sink, *(np.array(c, dtype=np.int64) for c in cols))

    @property
    def arc_count(self) -> int:
        return len(self.tails)

    @property
    def arcs(self) -> list[tuple[int, int, int]]:
        return list(zip(self.tails.tolist(), self.heads.tolist(), self.caps.tolist()))

    def dump(self) -> str:
        """Plain-text form: node count, ``source sink``, then one ``tail head cap`` per arc."""
        lines = [str(self.node_count), f"{self.source} {self.sink}"]
        lines.extend(f"{t} {h} {c}" for t, h, c in self.arcs)
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class FlowResult:
    value: int
    arc_flows: np.ndarray
    net: FlowNetwork

    @cached_property
    def source_mask(self) -> np.ndarray:
        """Nodes reachable from the source in the final residual graph."""
        return residual_reachable(self.net, self.arc_flows)

    @property
    def source_side(self) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.source_mask).tolist())

    def cut_capacity(self, net: FlowNetwork) -> int:
        crossing = self.source_mask[net.tails] & ~self.source_mask[net.heads]
        return int(net.caps[crossing].sum())


def max_flow(net: FlowNetwork, engine: str = "auto") -> FlowResult:
    """Integral maximum flow plus the residual-reachability minimum cut."""
    if engine == "auto":
        engine = "scipy" if net.arc_count > AUTO_SCIPY_ARCS and _fits_int32(net) else "dinic"
    if engine == "dinic":
        flows = _dinic(net)
    elif engine == "scipy":
        if not _fits_int32(net):
            raise InputError("capacities exceed the int32 range of the scipy engine")
        flows = _scipy_flows(net)
    else:
        raise InputError(f"unknown max-flow engine {engine!r}")
    out_src = flows[net.tails == net.source].sum() - flows[net.heads == net.source].sum()
    return FlowResult(int(out_src), flows, net)


def residual_reachable(net: FlowNetwork, flows: np.ndarray) -> np.ndarray:
    """Boolean mask of nodes reachable from the source in the residual graph."""
    fwd = flows < net.caps
    back = flows > 0
    rows = np.concatenate([net.tails[fwd], net.heads[back]])
    cols = np.concatenate([net.heads[fwd], net.tails[back]])
    n = net.node_count
    graph = sparse.csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    order = breadth_first_order(graph, net.source, directed=True, return_predecessors=False)
    mask = np.zeros(n, dtype=bool)
    mask[order] = True
    return mask


def check_flow(net: FlowNetwork, result: FlowResult) -> None:
    """Raise :class:`InvariantBreach` unless ``result`` is a max flow with a matching min cut."""
    f = result.arc_flows
    if len(f) != net.arc_count:
        raise InvariantBreach("arc flow vector has the wrong length")
    if (f < 0).any() or (f > net.caps).any():
        raise InvariantBreach("arc flow outside [0, capacity]")
    excess = np.zeros(net.node_count, dtype=np.int64)
    np.add.at(excess, net.heads, f)
    np.subtract.at(excess, net.tails, f)
    internal = np.ones(net.node_count, dtype=bool)
    internal[[net.source, net.sink]] = False
    if excess[internal].any():
        raise InvariantBreach("flow conservation violated")
    if -excess[net.source] != result.value:
        raise InvariantBreach("value differs from the net outflow of the source")
    mask = result.source_mask
    if not mask[net.source] or mask[net.sink]:
        raise InvariantBreach("cut does not separate source from sink")
    leaving = mask[net.tails] & ~mask[net.heads]
    entering = ~mask[net.tails] & mask[net.heads]
    if (f[leaving] != net.caps[leaving]).any():
        raise InvariantBreach("an arc leaving the source side is unsaturated")
    if f[entering].any():
        raise InvariantBreach("an arc entering the source side carries flow")
    if result.cut_capacity(net) != result.value:
        raise InvariantBreach("flow value differs from cut capacity")


def _fits_int32(net: FlowNetwork) -> bool:
    if net.node_count > _INT32_MAX:
        return False
    return not len(net.caps) or int(net.caps.sum()) <= _INT32_MAX


def _dinic(net: FlowNetwork) -> np.ndarray:
    n, s, t = net.node_count, net.source, net.sink
    tails = net.tails.tolist()
    heads = net.heads.tolist()
    caps = net.caps.tolist()
    m = len(tails)
    # Residual arc 2i is arc i, 2i+1 its reverse.
    to = [0] * (2 * m)
    res = [0] * (2 * m)
    adj: list[list[int]] = [[] for _ in range(n)]
    for i in range(m):
        u, v = tails[i], heads[i]
        to[2 * i] = v
        to[2 * i + 1] = u
        res[2 * i] = caps[i]
        adj[u].append(2 * i)
        adj[v].append(2 * i + 1)

    while True:
        level = [-1] * n
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            lu = level[u] + 1
            for a in adj[u]:
                if res[a] and level[to[a]] < 0:
                    level[to[a]] = lu
                    queue.append(to[a])
        if level[t] < 0:
            break
        it = [0] * n
        stack = [s]
        path: list[int] = []
        while stack:
            u = stack[-1]
            if u == t:
                push = min(res[a] for a in path)
                cut_at = len(path)
                for k, a in enumerate(path):
                    res[a] -= push
                    res[a ^ 1] += push
                    if not res[a] and k < cut_at:
                        cut_at = k
                del stack[cut_at + 1:]
                del path[cut_at:]
                continue
            arcs_u = adj[u]
            i = it[u]
            lv = level[u] + 1
            while i < len(arcs_u):
                a = arcs_u[i]
                if res[a] and level[to[a]] == lv:
                    break
                i += 1
            it[u] = i
            if i < len(arcs_u):
                a = arcs_u[i]
                stack.append(to[a])
                path.append(a)
            else:
                level[u] = -1
                stack.pop()
                if path:
                    path.pop()
    return np.array([res[2 * i + 1] for i in range(m)], dtype=np.int64)


def _scipy_flows(net: FlowNetwork) -> np.ndarray:
    n = net.node_count
    m = net.arc_count
    flows = np.zeros(m, dtype=np.int64)
    usable = (net.tails != net.heads) & (net.caps > 0)
    idx = np.flatnonzero(usable)
    if not len(idx):
        return flows
    keys = net.tails[idx] * n + net.heads[idx]
    order = np.lexsort((idx, keys))
    idx, keys = idx[order], keys[order]
    ukeys, group = np.unique(keys, return_inverse=True)
    group_caps = np.bincount(group, weights=net.caps[idx], minlength=len(ukeys)).astype(np.int64)
    graph = sparse.csr_matrix(
        (group_caps.astype(np.int32), ((ukeys // n).astype(np.int32), (ukeys % n).astype(np.int32))),
        shape=(n, n),
    )
    res = maximum_flow(graph, int(net.source), int(net.sink), method="dinic")
    fcoo = res.flow.tocoo()
    fkeys = fcoo.row.astype(np.int64) * n + fcoo.col.astype(np.int64)
    forder = np.argsort(fkeys)
    fkeys, fvals = fkeys[forder], np.asarray(fcoo.data, dtype=np.int64)[forder]
    pos = np.searchsorted(fkeys, ukeys)
    pos_ok = pos < len(fkeys)
    hit = np.zeros(len(ukeys), dtype=bool)
    hit[pos_ok] = fkeys[pos[pos_ok]] == ukeys[pos_ok]
    group_flow = np.zeros(len(ukeys), dtype=np.int64)
    group_flow[hit] = np.maximum(fvals[pos[hit]], 0)
    # Spread each aggregated flow over its parallel arcs in arc order.
    arc_caps = net.caps[idx]
    cum = np.cumsum(arc_caps)
    group_start = np.zeros(len(ukeys), dtype=np.int64)
    first = np.r_[0, np.flatnonzero(np.diff(group)) + 1]
    group_start[group[first]] = cum[first] - arc_caps[first]
    before = cum - arc_caps - group_start[group]
    flows[idx] = np.clip(group_flow[group] - before, 0, arc_caps)
    return flows


def path_network(caps: Sequence[int]) -> FlowNetwork:
    """A simple path ``0 -> 1 -> ... -> k`` with the given capacities."""
    k = len(caps)
    return FlowNetwork.from_arcs(k + 1, 0, k, [(i, i + 1, c) for i, c in enumerate(caps)])
