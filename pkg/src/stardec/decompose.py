"""Star decompositions of complete multigraphs with free centres.

Below the threshold, :func:`decompose` always succeeds. It runs merge,
assign, compress and pack, expands each vertex's compressed stars back
into the assigned sizes, and undoes the merges. Above the threshold, the
problem is NP-complete and :func:`attempt` is a bounded search whose
failures refute only the assignments it tried.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .assignment import (
    Assignment,
    MergePlan,
    compress_all,
    equitable_assign,
    equitable_violations,
    greedy_assign,
    greedy_violations,
    merge_small,
    split_back,
)
from .errors import DomainError, InputError, InvariantBreach, StructuralError, ThresholdExceeded
from .multigraph import Multigraph, Star, StarPacking, complete_multigraph, coverage_check
from .multiset import IntMultiset
from .packing import CenterSpec, Certificate, multistar_decompose, multistar_violation, pack_with_centers


# -- threshold ------------------------------------------------------------------


@dataclass(frozen=True)
class AlphaPrime:
    """``lam/(lam+1)`` for odd ``lam``; ``(lam - 6 + 4*sqrt 2)/lam`` for even ``lam``."""

    lam: int

    @property
    def exact(self) -> str:
        if self.lam % 2:
            return f"{self.lam}/{self.lam + 1}"
        return f"({self.lam - 6} + 4*sqrt(2))/{self.lam}"

    @property
    def value(self) -> float:
        if self.lam % 2:
            return self.lam / (self.lam + 1)
        return (self.lam - 6 + 4 * math.sqrt(2)) / self.lam

    def admits(self, m: int, n: int) -> bool:
        """Exact test of ``m <= alpha' * (n - 1)``."""
        R = n - 1
        if self.lam % 2:
            return m * (self.lam + 1) <= self.lam * R
        return even_admits(self.lam, m, R)

    def floor(self, n: int) -> int:
        """``floor(alpha' * (n - 1))``."""
        R = n - 1
        if self.lam % 2:
            return self.lam * R // (self.lam + 1)
        return even_floor(self.lam, R)


def alpha_prime(lam: int) -> AlphaPrime:
    if isinstance(lam, bool) or not isinstance(lam, int):
        raise InputError(f"lambda must be an integer, got {lam!r}")
    if lam < 2:
        raise DomainError("the threshold is defined for lambda >= 2")
    return AlphaPrime(lam)


def even_admits(lam: int, m: int, R: int) -> bool:
    """``lam*m <= (lam-6)R + 4*sqrt(2)*R`` decided with integers only."""
    L = lam * m - (lam - 6) * R
    if L <= 0:
        return R >= 0
    return R > 0 and L * L <= 32 * R * R


def even_floor(lam: int, R: int) -> int:
    # 4*sqrt(2)*R = sqrt(32 R^2) is irrational for R > 0, so flooring it first is exact.
    return ((lam - 6) * R + math.isqrt(32 * R * R)) // lam


@dataclass(frozen=True)
class Threshold:
    """Largest star size the constructive method accepts on ``lam K_n``."""

    lam: int

    def __post_init__(self):
        alpha_prime(self.lam)

    @property
    def ell(self) -> int:
        return (self.lam - 1) // 2 if self.lam % 2 else self.lam // 2

    def bound(self, n: int) -> int:
        if self.lam % 2:
            return (self.lam * (n - 1) + 1) // (self.lam + 1)
        return even_floor(self.lam, n - 1)

    def admits(self, m: int, n: int) -> bool:
        return m <= self.bound(n)


# -- instances ------------------------------------------------------------------


@dataclass(frozen=True)
class DecompInstance:
    lam: int
    n: int
    sizes: IntMultiset

    def __post_init__(self):
        for name, x in (("lambda", self.lam), ("n", self.n)):
            if isinstance(x, bool) or not isinstance(x, int) or x < 1:
                raise InputError(f"{name} must be a positive integer, got {x!r}")
        if not isinstance(self.sizes, IntMultiset):
            object.__setattr__(self, "sizes", IntMultiset(self.sizes))
        need = self.lam * (self.n * (self.n - 1) // 2)
        if self.sizes.sigma() != need:
            raise InputError(f"sizes sum to {self.sizes.sigma()}, but {self.lam}K_{self.n} has {need} edges")
        if self.sizes and self.sizes.max() > self.n - 1:
            raise InputError(f"size {self.sizes.max()} exceeds n-1 = {self.n - 1}")

    @property
    def host(self) -> Multigraph:
        return complete_multigraph(self.lam, self.n)

    def to_json(self) -> dict:
        return {"lambda": self.lam, "n": self.n, "sizes": self.sizes.to_json()}

    @classmethod
    def from_json(cls, obj: Any) -> "DecompInstance":
        if not isinstance(obj, dict) or not {"lambda", "n", "sizes"} <= obj.keys():
            raise InputError('instance must be an object with "lambda", "n" and "sizes"')
        return cls(obj["lambda"], obj["n"], IntMultiset.from_json(obj["sizes"]))


def verify(inst: DecompInstance, d: StarPacking | list[Star]) -> bool:
    """True iff ``d`` is an exact star decomposition of ``inst``."""
    stars = d.stars if isinstance(d, StarPacking) else tuple(d)
    if IntMultiset(s.size for s in stars) != inst.sizes:
        return False
    try:
        return bool(coverage_check(StarPacking(stars, inst.host), exact=True))
    except StructuralError:
        return False


def _finish(inst: DecompInstance, stars: list[Star]) -> StarPacking:
    out = StarPacking(tuple(stars), inst.host)
    if not verify(inst, out):
        raise InvariantBreach("constructed decomposition failed verification")
    return out


# -- exact search for tiny instances ------------------------------------------


def _assignments(inst: DecompInstance) -> Iterator[tuple[IntMultiset, ...]]:
    """Size-to-vertex assignments up to vertex permutation, with cheap pruning."""
    n, lam = inst.n, inst.lam
    cap = lam * (n - 1)
    values = list(inst.sizes)
    bins: list[list[int]] = [[] for _ in range(n)]
    sums = [0] * n

    # k centres can use at most the lam*(C(n,2) - C(n-k,2)) edges meeting them,
    # and must cover the lam*C(k,2) edges among themselves
    top_cap = [lam * (n * (n - 1) // 2 - (n - k) * (n - k - 1) // 2) for k in range(n + 1)]
    low_need = [lam * (k * (k - 1) // 2) for k in range(n + 1)]
    suffix = [0] * (len(values) + 1)
    for i in range(len(values) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + values[i]

    def ok(b: list[int], i: int) -> bool:
        if multistar_violation([lam] * (n - 1), IntMultiset(b)) is not None:
            return False
        order = sorted(sums)
        acc = 0
        for k, s in enumerate(order, 1):
            acc += s
            if acc + suffix[i] < low_need[k]:
                return False
        acc = 0
        for k, s in enumerate(reversed(order), 1):
            acc += s
            if acc > top_cap[k]:
                return False
        return True

    def rec(i: int) -> Iterator[tuple[IntMultiset, ...]]:
        if i == len(values):
            yield tuple(IntMultiset(b) for b in bins)
            return
        x = values[i]
        seen = set()
        # lightest bins first, so balanced assignments come early
        for v in sorted(range(n), key=lambda u: (sums[u], u)):
            key = tuple(bins[v])
            if key in seen or sums[v] + x > cap:
                continue
            seen.add(key)
            bins[v].append(x)
            sums[v] += x
            if ok(bins[v], i + 1):
                yield from rec(i + 1)
            bins[v].pop()
            sums[v] -= x

    yield from rec(0)


def decide_small(inst: DecompInstance, engine: str = "auto") -> StarPacking | None:
    """Exact decision by enumerating assignments and packing each one."""
    g = inst.host
    for sets in _assignments(inst):
        out = pack_with_centers(g, CenterSpec(sets), engine)
        if isinstance(out, StarPacking):
            return _finish(inst, list(out.stars))
    return None


# -- the constructive pipeline ------------------------------------------------


@dataclass(frozen=True)
class PipelineTrace:
    plan: MergePlan
    assignment: Assignment
    compressed: tuple[IntMultiset, ...]
    case1: bool


def decompose(inst: DecompInstance, engine: str = "auto", trace: list | None = None) -> StarPacking:
    lam, n = inst.lam, inst.n
    if lam < 2:
        raise DomainError("decompose needs lambda >= 2; use attempt() for lambda = 1")
    th = Threshold(lam)
    m = th.bound(n)
    if inst.sizes and inst.sizes.max() > m:
        raise ThresholdExceeded(
            f"size {inst.sizes.max()} exceeds the constructive bound {m} for {lam}K_{n}; use attempt mode"
        )
    if n <= 4:
        d = decide_small(inst, engine)
        if d is None:
            raise InvariantBreach(f"no decomposition found for a below-threshold instance on {n} vertices")
        return d

    plan = merge_small(inst.sizes, m)
    if plan.final_sizes.sigma() != inst.sizes.sigma() or plan.replay_reverse() != inst.sizes:
        raise InvariantBreach("merge plan does not conserve sizes")
    if lam % 2:
        a = greedy_assign(plan.final_sizes, n)
        bad = greedy_violations(a)
    else:
        a = equitable_assign(plan.final_sizes, n)
        bad = equitable_violations(a, m)
    if bad:
        raise InvariantBreach(f"assignment breaks {', '.join(bad)}")
    comp = compress_all(a, m, lam)
    g = inst.host
    packed = pack_with_centers(g, CenterSpec(comp.sets), engine)
    if isinstance(packed, Certificate):
        raise InvariantBreach(f"compressed assignment is infeasible (Delta={packed.delta})")

    merged_stars: list[Star] = []
    for v in range(n):
        leaf_mults = Counter(w for s in packed.stars_at(v) for w in s.leaves)
        merged_stars.extend(multistar_decompose(v, leaf_mults, a.sets[v], engine))
    if IntMultiset(s.size for s in merged_stars) != plan.final_sizes:
        raise InvariantBreach("multistar expansion changed the size multiset")
    stars = split_back(merged_stars, plan)
    if trace is not None:
        trace.append(PipelineTrace(plan, a, comp.sets, comp.case1))
    return _finish(inst, stars)


# -- attempt mode ---------------------------------------------------------------


@dataclass(frozen=True)
class AttemptFailure:
    """Certificates refuting the tried assignments only, not the instance."""

    certificates: tuple[tuple[str, Certificate | None], ...]
    note: str = field(
        default="each certificate refutes one tried assignment of sizes to centres; the instance itself is undecided"
    )

    def to_json(self) -> dict:
        return {
            "feasible": None,
            "note": self.note,
            "tries": [
                {"strategy": name, "certificate": c.to_json() if c is not None else None}
                for name, c in self.certificates
            ],
        }


def _random_balanced(sizes: IntMultiset, n: int, rng: random.Random) -> Assignment:
    values = list(sizes)
    rng.shuffle(values)
    bins: list[list[int]] = [[] for _ in range(n)]
    order = list(range(n))
    rng.shuffle(order)
    for i, x in enumerate(values):
        bins[order[i % n]].append(x)
    return Assignment(tuple(IntMultiset(b) for b in bins))


def _candidate(inst: DecompInstance, i: int, seed: int) -> tuple[str, Assignment]:
    if i == 0:
        return "greedy", greedy_assign(inst.sizes, inst.n)
    if i == 1:
        return "equitable", equitable_assign(inst.sizes, inst.n)
    rng = random.Random(f"{seed}:{i}")
    start = _random_balanced(inst.sizes, inst.n, rng)
    return f"equitable-restart-{i - 1}", equitable_assign(inst.sizes, inst.n, start)


def _try_one(inst: DecompInstance, i: int, seed: int, engine: str):
    name, a = _candidate(inst, i, seed)
    cap = inst.lam * (inst.n - 1)
    if any(M.sigma() > cap for M in a.sets):
        return name, None
    out = pack_with_centers(inst.host, CenterSpec(a.sets), engine)
    return name, out


def attempt(inst: DecompInstance, tries: int = 8, seed: int = 0, threads: int = 1,
            engine: str = "auto") -> StarPacking | AttemptFailure:
    """Constructive method when it applies, else a bounded assignment search."""
    if inst.lam >= 2 and (not inst.sizes or inst.sizes.max() <= Threshold(inst.lam).bound(inst.n)):
        return decompose(inst, engine)
    if inst.n <= 4:
        d = decide_small(inst, engine)
        if d is not None:
            return d
    idx = range(max(1, tries))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda i: _try_one(inst, i, seed, engine), idx))
    else:
        results = []
        for i in idx:
            results.append(_try_one(inst, i, seed, engine))
            if isinstance(results[-1][1], StarPacking):
                break
    certs = []
    for name, out in results:
        if isinstance(out, StarPacking):
            return _finish(inst, list(out.stars))
        certs.append((name, out))
    return AttemptFailure(tuple(certs))


def threshold_ratio(inst: DecompInstance) -> Fraction:
    """``max(sizes) / (n - 1)`` as an exact fraction."""
    return Fraction(inst.sizes.max(), inst.n - 1)
