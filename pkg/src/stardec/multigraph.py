"""Loopless multigraphs on dense vertex ids, stars, and packings."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import InputError, StructuralError

EDGE_LIMIT = 2**62


class Multigraph:
    """A loopless multigraph on vertices ``0..n-1``.

    Either a complete multigraph with constant multiplicity ``lam`` on every
    pair, or an explicit map from pairs ``(u, v)`` with ``u < v`` to their
    multiplicity. Absent pairs have multiplicity 0. Both forms answer
    :meth:`mu` identically.
    """

    __slots__ = ("n", "lam", "_mu", "_arrays")

    def __init__(self, n: int, edges: Mapping[tuple[int, int], int] | None = None, *, lam: int | None = None):
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise InputError(f"vertex count must be a nonnegative integer, got {n!r}")
        self.n = n
        self.lam = None
        self._mu: dict[tuple[int, int], int] = {}
        self._arrays = None
        if lam is not None:
            if edges:
                raise InputError("give either explicit edges or a constant lambda, not both")
            if isinstance(lam, bool) or not isinstance(lam, int) or lam < 0:
                raise InputError(f"lambda must be a nonnegative integer, got {lam!r}")
            self.lam = lam
            if lam * (n * (n - 1) // 2) > EDGE_LIMIT:
                raise InputError("total edge count exceeds 2^62")
            return
        total = 0
        for (u, v), mult in (edges or {}).items():
            u, v = self._check_pair(u, v)
            if isinstance(mult, bool) or not isinstance(mult, int) or mult < 0:
                raise InputError(f"multiplicity of {{{u},{v}}} must be a nonnegative integer, got {mult!r}")
            if mult:
                self._mu[(u, v)] = self._mu.get((u, v), 0) + mult
                total += mult
        if total > EDGE_LIMIT:
            raise InputError("total edge count exceeds 2^62")

    def _check_pair(self, u: Any, v: Any) -> tuple[int, int]:
        for x in (u, v):
            if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < self.n:
                raise InputError(f"vertex {x!r} outside 0..{self.n - 1}")
        if u == v:
            raise InputError(f"loop at vertex {u} is not allowed")
        return (u, v) if u < v else (v, u)

    @property
    def is_complete(self) -> bool:
        return self.lam is not None

    def mu(self, u: int, v: int) -> int:
        if u == v:
            return 0
        if self.lam is not None:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"pair {{{u},{v}}} outside 0..{self.n - 1}")
            return self.lam
        return self._mu.get((u, v) if u < v else (v, u), 0)

    def pairs(self) -> Iterator[tuple[tuple[int, int], int]]:
        """Pairs with positive multiplicity, in lexicographic order."""
        if self.lam is not None:
            if self.lam:
                for u in range(self.n):
                    for v in range(u + 1, self.n):
                        yield (u, v), self.lam
            return
        for key in sorted(self._mu):
            yield key, self._mu[key]

    def pair_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(us, vs, mults)`` for positive-multiplicity pairs, lexicographic."""
        if self._arrays is None:
            if self.lam is not None:
                if self.lam:
                    us, vs = np.triu_indices(self.n, k=1)
                else:
                    us = vs = np.zeros(0, dtype=np.int64)
                mults = np.full(len(us), self.lam, dtype=np.int64)
            else:
                keys = sorted(self._mu)
                us = np.array([k[0] for k in keys], dtype=np.int64)
                vs = np.array([k[1] for k in keys], dtype=np.int64)
                mults = np.array([self._mu[k] for k in keys], dtype=np.int64)
            self._arrays = (us.astype(np.int64), vs.astype(np.int64), mults)
        return self._arrays

    def neighbors(self, u: int) -> list[int]:
        if self.lam is not None:
            return [v for v in range(self.n) if v != u] if self.lam else []
        return sorted(v for (a, b) in self._mu for v in ((b,) if a == u else (a,) if b == u else ()))

    def degree(self, u: int) -> int:
        return sum(self.mu(u, v) for v in range(self.n) if v != u)

    def total_edges(self) -> int:
        if self.lam is not None:
            return self.lam * (self.n * (self.n - 1) // 2)
        return sum(self._mu.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multigraph):
            return NotImplemented
        return self.n == other.n and dict(self.pairs()) == dict(other.pairs())

    def __repr__(self) -> str:
        if self.lam is not None:
            return f"{self.lam}K_{self.n}"
        return f"Multigraph(n={self.n}, edges={len(self._mu)} pairs)"

    def to_json(self) -> dict:
        if self.lam is not None:
            return {"n": self.n, "lambda": self.lam}
        return {"n": self.n, "edges": [[u, v, m] for (u, v), m in self.pairs()]}

    @classmethod
    def from_json(cls, obj: Any) -> "Multigraph":
        if not isinstance(obj, dict) or "n" not in obj:
            raise InputError('multigraph must be an object with an "n" field')
        n = obj["n"]
        if "lambda" in obj:
            if "edges" in obj:
                raise InputError('multigraph gives both "lambda" and "edges"')
            return cls(n, lam=obj["lambda"])
        edges = obj.get("edges", [])
        if not isinstance(edges, list):
            raise InputError('"edges" must be an array of [u, v, mult] triples')
        mu: dict[tuple[int, int], int] = {}
        g = cls(n)
        for e in edges:
            if not isinstance(e, list) or len(e) != 3:
                raise InputError(f"edge entry must be [u, v, mult], got {e!r}")
            key = g._check_pair(e[0], e[1])
            if isinstance(e[2], bool) or not isinstance(e[2], int) or e[2] < 0:
                raise InputError(f"edge multiplicity must be a nonnegative integer, got {e[2]!r}")
            mu[key] = mu.get(key, 0) + e[2]
        return cls(n, mu)


def complete_multigraph(lam: int, n: int) -> Multigraph:
    if isinstance(lam, bool) or not isinstance(lam, int) or isinstance(n, bool) or not isinstance(n, int):
        raise InputError(f"complete multigraph needs integer lambda and n, got ({lam!r}, {n!r})")
    if lam < 1 or n < 1:
        raise InputError(f"complete multigraph needs lambda >= 1 and n >= 1, got ({lam}, {n})")
    return Multigraph(n, lam=lam)


@dataclass(frozen=True, order=True)
class Star:
    center: int
    leaves: tuple[int, ...]

    def __post_init__(self):
        leaves = tuple(sorted(self.leaves))
        object.__setattr__(self, "leaves", leaves)
        if not leaves:
            raise StructuralError(f"star at {self.center} has no leaves")
        if len(set(leaves)) != len(leaves):
            raise StructuralError(f"star at {self.center} repeats a leaf: {leaves}")
        if self.center in leaves:
            raise StructuralError(f"star centre {self.center} is also a leaf")

    @property
    def size(self) -> int:
        return len(self.leaves)

    def to_json(self) -> dict:
        return {"center": self.center, "leaves": list(self.leaves)}

    @classmethod
    def from_json(cls, obj: Any) -> "Star":
        if not isinstance(obj, dict) or "center" not in obj or "leaves" not in obj:
            raise InputError(f'star must be {{"center": u, "leaves": [...]}}, got {obj!r}')
        return cls(obj["center"], tuple(obj["leaves"]))


@dataclass(frozen=True)
class StarPacking:
    stars: tuple[Star, ...]
    host: Multigraph = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "stars", tuple(self.stars))

    def __len__(self) -> int:
        return len(self.stars)

    def sizes(self):
        from .multiset import IntMultiset

        return IntMultiset(s.size for s in self.stars)

    def stars_at(self, center: int) -> list[Star]:
        return [s for s in self.stars if s.center == center]

    def to_json(self) -> list[dict]:
        return [s.to_json() for s in self.stars]


@dataclass(frozen=True)
class CoverageReport:
    ok: bool
    exact: bool
    pair: tuple[int, int] | None = None
    covered: int = 0
    allowed: int = 0

    def __bool__(self) -> bool:
        return self.ok


def coverage_counts(stars: Iterable[Star], n: int) -> dict[tuple[int, int], int]:
    """Per-pair count of star edges, keyed by ``(min, max)``."""
    centers, leaves = _edge_arrays(stars, n)
    lo = np.minimum(centers, leaves)
    hi = np.maximum(centers, leaves)
    keys, counts = np.unique(lo * n + hi, return_counts=True)
    return {(int(k // n), int(k % n)): int(c) for k, c in zip(keys, counts)}


def _edge_arrays(stars: Iterable[Star], n: int) -> tuple[np.ndarray, np.ndarray]:
    centers: list[int] = []
    leaves: list[int] = []
    for s in stars:
        for x in (s.center, *s.leaves):
            if not 0 <= x < n:
                raise StructuralError(f"star vertex {x} outside host range 0..{n - 1}")
        centers.extend([s.center] * len(s.leaves))
        leaves.extend(s.leaves)
    return np.asarray(centers, dtype=np.int64), np.asarray(leaves, dtype=np.int64)


def coverage_check(p: StarPacking, exact: bool) -> CoverageReport:
    """Check per-pair coverage against the host: ``<= mu`` or, if exact, ``== mu``.

    Returns the lexicographically first violating pair, or success.
    """
    g = p.host
    n = g.n
    centers, leaves = _edge_arrays(p.stars, n)
    lo = np.minimum(centers, leaves)
    hi = np.maximum(centers, leaves)
    used_keys, used_counts = np.unique(lo * n + hi, return_counts=True)
    us, vs, mults = g.pair_arrays()
    host_keys = us * n + vs
    # Union of keys from both sides, compared pair by pair.
    all_keys = np.union1d(used_keys, host_keys)
    covered = np.zeros(len(all_keys), dtype=np.int64)
    allowed = np.zeros(len(all_keys), dtype=np.int64)
    covered[np.searchsorted(all_keys, used_keys)] = used_counts
    allowed[np.searchsorted(all_keys, host_keys)] = mults
    bad = covered != allowed if exact else covered > allowed
    if not bad.any():
        return CoverageReport(True, exact)
    i = int(np.argmax(bad))
    key = int(all_keys[i])
    return CoverageReport(False, exact, (key // n, key % n), int(covered[i]), int(allowed[i]))
