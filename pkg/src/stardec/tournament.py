"""Lambda-fold tournaments with prescribed out-degrees and out-neighbourhood sizes.

Feasibility is a closed-form check over ``k = 0..n-1``. Construction packs
one star of size ``b(v)`` (when ``b(v) >= 2``) plus unit stars at every
vertex and orients each star edge away from its centre.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import Infeasible, InputError, InvariantBreach
from .multigraph import StarPacking, complete_multigraph
from .multiset import IntMultiset
from .packing import CenterSpec, pack_with_centers


def _int_list(name: str, xs: Any) -> tuple[int, ...]:
    if not isinstance(xs, (list, tuple)):
        raise InputError(f'"{name}" must be an array of integers')
    for x in xs:
        if isinstance(x, bool) or not isinstance(x, int):
            raise InputError(f'"{name}" must contain integers, got {x!r}')
    return tuple(xs)


@dataclass(frozen=True)
class TournamentSpec:
    lam: int
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        if isinstance(self.lam, bool) or not isinstance(self.lam, int) or self.lam < 1:
            raise InputError(f"lambda must be a positive integer, got {self.lam!r}")
        a = _int_list("a", self.a)
        b = _int_list("b", self.b) if self.b is not None else (0,) * len(a)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if len(a) != len(b):
            raise InputError(f"a has {len(a)} entries but b has {len(b)}")
        for v, (x, y) in enumerate(zip(a, b)):
            if not x >= y >= 0:
                raise InputError(f"need a(v) >= b(v) >= 0, got a({v})={x}, b({v})={y}")
        n = len(a)
        if sum(a) != self.lam * (n * (n - 1) // 2):
            raise InputError(f"out-degrees sum to {sum(a)}, but {self.lam}K_{n} has {self.lam * (n * (n - 1) // 2)} edges")

    @property
    def n(self) -> int:
        return len(self.a)

    def to_json(self) -> dict:
        return {"lambda": self.lam, "a": list(self.a), "b": list(self.b)}

    @classmethod
    def from_json(cls, obj: Any) -> "TournamentSpec":
        if not isinstance(obj, dict) or "lambda" not in obj or "a" not in obj:
            raise InputError('tournament spec must be an object with "lambda" and "a" (and optionally "b")')
        a = obj["a"]
        b = obj.get("b")
        if b is None and isinstance(a, list):
            b = [0] * len(a)
        return cls(obj["lambda"], a, b)


@dataclass(frozen=True)
class Tournament:
    """``out[u][v]`` edges oriented from ``u`` to ``v``."""

    lam: int
    out: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.out)

    def out_degree(self, v: int) -> int:
        return sum(self.out[v])

    def out_neighbours(self, v: int) -> int:
        return sum(1 for x in self.out[v] if x > 0)

    def to_json(self) -> dict:
        return {"lambda": self.lam, "out": [list(r) for r in self.out]}


@dataclass(frozen=True)
class Verdict:
    feasible: bool
    k: int | None = None    # first violating k
    lhs: int = 0
    rhs: int = 0

    def __bool__(self) -> bool:
        return self.feasible


def _check(lam: int, n: int, a: Sequence[int], b: Sequence[int]) -> Verdict:
    a_arr = np.asarray(a, dtype=np.int64)
    b_arr = np.asarray(b, dtype=np.int64)
    for k in range(n):
        bk = np.maximum(0, b_arr - n + k + 1)
        psi = int(np.sort(a_arr - bk)[::-1][:k].sum())
        lhs2 = 2 * (psi + int(bk.sum()))
        rhs2 = lam * k * (2 * n - k - 1)
        if lhs2 > rhs2:
            return Verdict(False, k, lhs2, rhs2)
    return Verdict(True)


def tournament_feasible(spec: TournamentSpec) -> Verdict:
    """Check ``psi_k + sum_v b_k(v) <= lam*k*(2n-k-1)/2`` for each k (both sides doubled)."""
    return _check(spec.lam, spec.n, spec.a, spec.b)


def landau_feasible(lam: int, a: Sequence[int]) -> Verdict:
    """Out-degrees only: every top-k sum of ``a`` at most ``lam*k*(2n-k-1)/2``."""
    n = len(a)
    if sum(a) != lam * (n * (n - 1) // 2):
        raise InputError("out-degrees must sum to lam * C(n, 2)")
    top = sorted(a, reverse=True)
    acc = 0
    for k in range(n):
        if 2 * acc > lam * k * (2 * n - k - 1):
            return Verdict(False, k, 2 * acc, lam * k * (2 * n - k - 1))
        acc += top[k]
    return Verdict(True)


def center_spec_for(spec: TournamentSpec) -> CenterSpec:
    sets = []
    for a, b in zip(spec.a, spec.b):
        if b >= 2:
            sets.append(IntMultiset.from_runs([(b, 1), (1, a - b)]))
        else:
            sets.append(IntMultiset.from_runs([(1, a)]))
    return CenterSpec(tuple(sets))


def realize_tournament(spec: TournamentSpec, engine: str = "auto") -> Tournament:
    g = complete_multigraph(spec.lam, spec.n) if spec.n else None
    if g is None:
        return Tournament(spec.lam, ())
    out = pack_with_centers(g, center_spec_for(spec), engine)
    if not isinstance(out, StarPacking):
        raise Infeasible("no tournament meets the out-degree and out-neighbourhood bounds", certificate=out)
    n = spec.n
    mat = [[0] * n for _ in range(n)]
    for s in out.stars:
        for w in s.leaves:
            mat[s.center][w] += 1
    t = Tournament(spec.lam, tuple(tuple(r) for r in mat))
    if not verify_tournament(spec, t):
        raise InvariantBreach("realized tournament fails verification")
    return t


def verify_tournament(spec: TournamentSpec, t: Tournament) -> bool:
    n = spec.n
    if t.n != n or t.lam != spec.lam or any(len(r) != n for r in t.out):
        return False
    for u in range(n):
        if t.out[u][u] != 0:
            return False
        for v in range(u + 1, n):
            if t.out[u][v] < 0 or t.out[v][u] < 0 or t.out[u][v] + t.out[v][u] != spec.lam:
                return False
    return all(t.out_degree(v) == spec.a[v] and t.out_neighbours(v) >= spec.b[v] for v in range(n))
