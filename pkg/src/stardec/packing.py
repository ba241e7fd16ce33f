"""Star packings with prescribed centres, decided by one max-flow computation.

The network has a source, a sink, one node per prescribed star and one node
per vertex pair with positive multiplicity. A star of size m at u draws m
units from the source and may send one unit to each pair node containing u;
a pair node forwards at most mu(uv) units to the sink. A packing exists iff
the flow saturates every source arc, and a saturated unit arc puts the other
endpoint of its pair into that star's leaf set.

When the flow falls short, the source side of the minimum cut yields a
restriction function f with negative Delta_f, which is returned as the
certificate of infeasibility.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import DomainError, Infeasible, InputError, InvariantBreach, StructuralError
from .maxflow import FlowNetwork, FlowResult, max_flow
from .multigraph import Multigraph, Star, StarPacking, coverage_check
from .multiset import SIGMA_LIMIT, IntMultiset

SOURCE = 0
SINK = 1
_EMPTY = IntMultiset()


@dataclass(frozen=True)
class CenterSpec:
    """Prescribed star sizes ``M_v`` for each vertex ``0..n-1``."""

    sets: tuple[IntMultiset, ...]

    def __post_init__(self):
        sets = tuple(self.sets)
        for M in sets:
            if not isinstance(M, IntMultiset):
                raise InputError(f"centre multisets must be IntMultiset, got {type(M).__name__}")
        if sum(M.sigma() for M in sets) > SIGMA_LIMIT:
            raise InputError("total prescribed size exceeds 2^62")
        object.__setattr__(self, "sets", sets)

    @classmethod
    def empty(cls, n: int) -> "CenterSpec":
        return cls(tuple(IntMultiset() for _ in range(n)))

    @classmethod
    def from_mapping(cls, n: int, centers: Mapping[int, Iterable[int]]) -> "CenterSpec":
        sets = [IntMultiset() for _ in range(n)]
        for v, sizes in centers.items():
            if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < n:
                raise StructuralError(f"centre {v!r} outside 0..{n - 1}")
            sets[v] = sizes if isinstance(sizes, IntMultiset) else IntMultiset(sizes)
        return cls(tuple(sets))

    @property
    def n(self) -> int:
        return len(self.sets)

    def __getitem__(self, v: int) -> IntMultiset:
        return self.sets[v]

    def total(self) -> int:
        """``z``: the number of edges the packing must use."""
        return sum(M.sigma() for M in self.sets)

    def star_count(self) -> int:
        return sum(len(M) for M in self.sets)

    def to_json(self) -> dict:
        return {str(v): M.to_json() for v, M in enumerate(self.sets) if M}

    @classmethod
    def from_json(cls, n: int, obj: Any) -> "CenterSpec":
        if not isinstance(obj, dict):
            raise InputError('"centers" must be an object mapping vertex ids to size arrays')
        centers = {}
        for key, sizes in obj.items():
            try:
                v = int(key)
            except (TypeError, ValueError):
                raise InputError(f"centre key {key!r} is not an integer") from None
            centers[v] = IntMultiset.from_json(sizes)
        return cls.from_mapping(n, centers)


@dataclass(frozen=True)
class RestrictionFunction:
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(self.values)
        for x in vals:
            if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
                raise DomainError(f"restriction values must be integers, got {x!r}")
        object.__setattr__(self, "values", tuple(int(x) for x in vals))

    def __getitem__(self, v: int) -> int:
        return self.values[v]

    def __len__(self) -> int:
        return len(self.values)

    def check(self, spec: CenterSpec) -> None:
        if len(self.values) != spec.n:
            raise DomainError(f"restriction function has {len(self.values)} values for {spec.n} vertices")
        for v, (x, M) in enumerate(zip(self.values, spec.sets)):
            if not 0 <= x <= len(M):
                raise DomainError(f"f({v})={x} outside 0..{len(M)}")

    def to_json(self) -> dict:
        return {str(v): x for v, x in enumerate(self.values)}


@dataclass(frozen=True)
class DeltaReport:
    delta_minus: int
    delta_plus: int

    @property
    def delta(self) -> int:
        return self.delta_plus - self.delta_minus


@dataclass(frozen=True)
class Certificate:
    """Infeasibility witness: a restriction function with negative Delta."""

    f: RestrictionFunction
    report: DeltaReport
    flow_value: int
    demand: int

    @property
    def delta(self) -> int:
        return self.report.delta

    def to_json(self) -> dict:
        return {
            "feasible": False,
            "f": self.f.to_json(),
            "delta_minus": self.report.delta_minus,
            "delta_plus": self.report.delta_plus,
            "delta": self.delta,
            "flow": self.flow_value,
            "demand": self.demand,
        }


def _check_host(g: Multigraph, spec: CenterSpec) -> None:
    if spec.n != g.n:
        raise StructuralError(f"centre spec covers {spec.n} vertices, host has {g.n}")


def delta_eval(g: Multigraph, spec: CenterSpec, f: RestrictionFunction | Sequence[int]) -> DeltaReport:
    """Exact ``(Delta^-_f, Delta^+_f)`` for a restriction function."""
    _check_host(g, spec)
    if not isinstance(f, RestrictionFunction):
        f = RestrictionFunction(tuple(f))
    f.check(spec)
    minus = sum(M.sigma_top(x) for M, x in zip(spec.sets, f.values))
    us, vs, mults = g.pair_arrays()
    fa = np.asarray(f.values, dtype=np.int64)
    plus = int(np.minimum(fa[us] + fa[vs], mults).sum()) if len(us) else 0
    return DeltaReport(minus, plus)


@dataclass(frozen=True, eq=False)
class _Layout:
    net: FlowNetwork
    s_vertex: np.ndarray    # owning vertex per s-node
    s_size: np.ndarray      # prescribed size per s-node
    mid_star: np.ndarray    # s-node index per unit arc
    mid_leaf: np.ndarray    # opposite endpoint per unit arc
    mid_offset: int         # arc id of the first unit arc
    demand: int


def _incidence(g: Multigraph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per vertex, its incident pairs sorted by the other endpoint (CSR form)."""
    us, vs, _ = g.pair_arrays()
    pidx = np.arange(len(us), dtype=np.int64)
    owner = np.concatenate([us, vs])
    other = np.concatenate([vs, us])
    pair = np.concatenate([pidx, pidx])
    order = np.lexsort((other, owner))
    owner, other, pair = owner[order], other[order], pair[order]
    ptr = np.zeros(g.n + 1, dtype=np.int64)
    np.cumsum(np.bincount(owner, minlength=g.n), out=ptr[1:])
    return ptr, other, pair


def _layout(g: Multigraph, spec: CenterSpec) -> _Layout:
    _check_host(g, spec)
    s_vertex = np.array([v for v, M in enumerate(spec.sets) for _ in range(len(M))], dtype=np.int64)
    s_size = np.array([x for M in spec.sets for x in M], dtype=np.int64)
    S = len(s_vertex)
    us, vs, mults = g.pair_arrays()
    P = len(us)
    ptr, other, pair = _incidence(g)
    deg = ptr[1:] - ptr[:-1]
    counts = deg[s_vertex] if S else np.zeros(0, dtype=np.int64)
    total = int(counts.sum())
    block_start = np.repeat(np.cumsum(counts) - counts, counts)
    pos = np.arange(total, dtype=np.int64) - block_start + np.repeat(ptr[:-1][s_vertex] if S else counts, counts)
    mid_star = np.repeat(np.arange(S, dtype=np.int64), counts)
    mid_leaf = other[pos]
    mid_pair = pair[pos]
    s_ids = 2 + np.arange(S, dtype=np.int64)
    t_ids = 2 + S + np.arange(P, dtype=np.int64)
    tails = np.concatenate([np.full(S, SOURCE, dtype=np.int64), s_ids[mid_star], t_ids])
    heads = np.concatenate([s_ids, t_ids[mid_pair], np.full(P, SINK, dtype=np.int64)])
    caps = np.concatenate([s_size, np.ones(total, dtype=np.int64), mults])
    net = FlowNetwork(2 + S + P, SOURCE, SINK, tails, heads, caps)
    return _Layout(net, s_vertex, s_size, mid_star, mid_leaf, S, int(s_size.sum()))


def build_packing_network(g: Multigraph, spec: CenterSpec) -> FlowNetwork:
    """Node ids: source 0, sink 1, s-nodes by (vertex, size desc), then t-nodes by pair."""
    return _layout(g, spec).net


def _extract(g: Multigraph, lay: _Layout, res: FlowResult) -> StarPacking:
    m = len(lay.mid_star)
    used = res.arc_flows[lay.mid_offset:lay.mid_offset + m] > 0
    stars_idx = lay.mid_star[used]
    leaves = lay.mid_leaf[used]
    bounds = np.searchsorted(stars_idx, np.arange(len(lay.s_vertex) + 1))
    stars = []
    for j in range(len(lay.s_vertex)):
        lv = leaves[bounds[j]:bounds[j + 1]].tolist()
        if len(lv) != lay.s_size[j]:
            raise InvariantBreach(f"star {j} received {len(lv)} leaves, expected {lay.s_size[j]}")
        stars.append(Star(int(lay.s_vertex[j]), tuple(lv)))
    return StarPacking(tuple(stars), g)


def _certificate(g: Multigraph, spec: CenterSpec, lay: _Layout, res: FlowResult) -> Certificate:
    on_source = res.source_mask[2:2 + len(lay.s_vertex)]
    f = np.bincount(lay.s_vertex[on_source], minlength=g.n)
    rf = RestrictionFunction(tuple(f.tolist()))
    rep = delta_eval(g, spec, rf)
    if rep.delta >= 0:
        raise InvariantBreach(f"cut-derived restriction function has Delta={rep.delta} >= 0")
    return Certificate(rf, rep, res.value, lay.demand)


def pack_with_centers(g: Multigraph, spec: CenterSpec, engine: str = "auto") -> StarPacking | Certificate:
    """A packing realising ``spec`` on ``g``, or a certificate that none exists."""
    lay = _layout(g, spec)
    res = max_flow(lay.net, engine)
    if res.value == lay.demand:
        packing = _extract(g, lay, res)
        if not coverage_check(packing, exact=False):
            raise InvariantBreach("extracted packing exceeds a pair multiplicity")
        return packing
    if res.value > lay.demand:
        raise InvariantBreach("flow exceeds total source capacity")
    return _certificate(g, spec, lay, res)


def packing_feasible(g: Multigraph, spec: CenterSpec, engine: str = "auto") -> bool:
    return isinstance(pack_with_centers(g, spec, engine), StarPacking)


# -- multistars -----------------------------------------------------------------


def multistar_violation(center_mults: IntMultiset | Iterable[int], sizes: IntMultiset) -> int | None:
    """Smallest ``s`` at which the top-``s`` size sum exceeds ``sum_w min(s, mu(cw))``."""
    mults = sorted(center_mults)
    prefix = sizes.prefix_sums()
    # sum_w min(s, mu_w) grows by the number of mu_w >= s when s increases.
    total = 0
    j = 0
    for s in range(1, len(sizes) + 1):
        while j < len(mults) and mults[j] < s:
            j += 1
        total += len(mults) - j
        if prefix[s] > total:
            return s
    return None


def multistar_feasible(center_mults: IntMultiset | Iterable[int], sizes: IntMultiset) -> bool:
    return multistar_violation(center_mults, sizes) is None


def multistar_decompose(center: int, leaf_mults: Mapping[int, int], sizes: IntMultiset,
                        engine: str = "auto") -> list[Star]:
    """Split the parallel edges at ``center`` into simple stars of the given sizes."""
    leaves = sorted(v for v, mult in leaf_mults.items() if mult > 0)
    s = multistar_violation([leaf_mults[v] for v in leaves], sizes)
    if s is not None:
        raise Infeasible(f"multistar at {center} violates the size bound at s={s}", certificate={"s": s})
    if center in leaves:
        raise StructuralError(f"multistar centre {center} listed as its own leaf")
    local = Multigraph(len(leaves) + 1, {(0, i + 1): leaf_mults[v] for i, v in enumerate(leaves)})
    spec = CenterSpec((sizes,) + (_EMPTY,) * len(leaves))
    out = pack_with_centers(local, spec, engine)
    if not isinstance(out, StarPacking):
        raise InvariantBreach(f"multistar at {center} passed the size bound but the flow fell short")
    return [Star(center, tuple(leaves[x - 1] for x in st.leaves)) for st in out.stars]
