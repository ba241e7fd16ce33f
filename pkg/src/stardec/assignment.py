"""Size preprocessing, vertex assignment, and per-vertex compression.

* :func:`merge_small` / :func:`split_back` fold pairs of small sizes into one
  star and later cut that star's leaf set apart again.
* :func:`greedy_assign` hands out sizes largest first to the vertex with the
  smallest running sum.
* :func:`equitable_assign` balances cardinalities and then swaps elements
  between vertices until no crossed pair can reduce the spread of sums.
* :func:`compress_odd` / :func:`compress_even` replace a vertex's multiset by
  one with the same sum, dominating top-i sums, and at most three distinct
  shapes of element.
"""

from __future__ import annotations

import heapq
from bisect import bisect_left
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvariantBreach, StructuralError
from .multigraph import Star
from .multiset import IntMultiset


# -- merging --------------------------------------------------------------------


@dataclass(frozen=True)
class MergePlan:
    original: IntMultiset
    final_sizes: IntMultiset
    merges: tuple[tuple[int, int, int], ...]   # (merged, left, right) in merge order
    bound: int

    def replay_reverse(self) -> IntMultiset:
        """Undo every merge on ``final_sizes``; must give ``original``."""
        counts = defaultdict(int, self.final_sizes.counts())
        for merged, left, right in reversed(self.merges):
            if counts[merged] <= 0:
                raise InvariantBreach(f"merge plan refers to missing size {merged}")
            counts[merged] -= 1
            counts[left] += 1
            counts[right] += 1
        return IntMultiset.from_counts(counts)


def merge_small(sizes: IntMultiset, m: int) -> MergePlan:
    """Merge the two smallest sizes while their sum stays within ``m``."""
    if sizes and sizes.max() > m:
        raise DomainError(f"size {sizes.max()} exceeds merge bound {m}")
    heap = list(sizes)
    heapq.heapify(heap)
    merges = []
    while len(heap) >= 2:
        x = heapq.heappop(heap)
        y = heap[0]
        if x + y > m:
            heapq.heappush(heap, x)
            break
        heapq.heapreplace(heap, x + y)
        merges.append((x + y, y, x))
    return MergePlan(sizes, IntMultiset(heap), tuple(merges), m)


def split_back(stars: Iterable[Star], plan: MergePlan) -> list[Star]:
    """Cut merged stars apart; the left part takes the lowest-id leaves."""
    stars = list(stars)
    got = IntMultiset(s.size for s in stars)
    if got != plan.final_sizes:
        raise StructuralError(f"star sizes {got!r} do not match merge plan sizes {plan.final_sizes!r}")
    if not plan.merges:
        return stars
    pools: dict[int, list[Star]] = defaultdict(list)
    for s in stars:
        pools[s.size].append(s)
    for merged, left, right in reversed(plan.merges):
        s = pools[merged].pop()
        pools[left].append(Star(s.center, s.leaves[:left]))
        pools[right].append(Star(s.center, s.leaves[left:]))
    out = [s for pool in pools.values() for s in pool]
    out.sort(key=lambda s: (s.center, -s.size, s.leaves))
    return out


# -- assignments ----------------------------------------------------------------


@dataclass(frozen=True)
class Assignment:
    sets: tuple[IntMultiset, ...]
    swaps: int = field(default=0, compare=False)

    @property
    def n(self) -> int:
        return len(self.sets)

    def union(self) -> IntMultiset:
        total = IntMultiset()
        for M in self.sets:
            total = total + M
        return total

    def sums(self) -> np.ndarray:
        return np.array([M.sigma() for M in self.sets], dtype=np.int64)

    def sizes(self) -> np.ndarray:
        return np.array([len(M) for M in self.sets], dtype=np.int64)


def greedy_assign(sizes: IntMultiset, n: int) -> Assignment:
    """Largest size first, onto the vertex with the least running sum (lowest index on ties)."""
    if n < 1:
        raise DomainError("greedy assignment needs at least one vertex")
    heap = [(0, v) for v in range(n)]
    bins: list[list[int]] = [[] for _ in range(n)]
    for x in sizes:
        total, v = heap[0]
        bins[v].append(x)
        heapq.heapreplace(heap, (total + x, v))
    return Assignment(tuple(IntMultiset(b) for b in bins))


def round_robin_assign(sizes: IntMultiset, n: int) -> Assignment:
    bins: list[list[int]] = [[] for _ in range(n)]
    for i, x in enumerate(sizes):
        bins[i % n].append(x)
    return Assignment(tuple(IntMultiset(b) for b in bins))


def cardinality_balanced(a: Assignment, t: int | None = None) -> bool:
    if t is None:
        t = int(a.sizes().sum())
    lo, hi = t // a.n, -(-t // a.n)
    return all(lo <= len(M) <= hi for M in a.sets)


def _crossed_pair(su: int, xs: Sequence[int], sv: int, ys: Sequence[int]) -> tuple[int, int] | None:
    """For ``su < sv``: the pair x in M_u, y in M_v, x < y with the smallest gap, if it breaks E2."""
    if su >= sv:
        return None
    best = None
    for y in ys:
        i = bisect_left(xs, y)
        if i:
            x = xs[i - 1]
            if best is None or y - x < best[1] - best[0]:
                best = (x, y)
    if best is not None and sv - su > best[1] - best[0]:
        return best
    return None


def _best_swap(D: int, xs: Sequence[int], ys: Sequence[int]) -> tuple[int, int]:
    """Among x < y with y - x < D, the pair whose swap lowers the squared sums most."""
    best = None
    for x in xs:
        for y in ys:
            d = y - x
            if 0 < d < D:
                gain = d * (D - d)
                if best is None or gain > best[0]:
                    best = (gain, x, y)
    return best[1], best[2]


def equitable_assign(sizes: IntMultiset, n: int, start: Assignment | None = None) -> Assignment:
    """Cardinality-balanced assignment with no crossed pair violating E2.

    Starts from the greedy assignment when that is balanced, otherwise from a
    round-robin one. While some crossed pair breaks E2, take the violating
    vertex pair with the largest sum difference (row-major on ties) and swap
    the elements whose exchange lowers the squared sums most. Each swap
    strictly lowers the sum of squared vertex sums, which bounds the loop.
    """
    t = len(sizes)
    if start is None:
        start = greedy_assign(sizes, n)
        if not cardinality_balanced(start, t):
            start = round_robin_assign(sizes, n)
    if not cardinality_balanced(start, t):
        raise DomainError("equitable assignment must start from a cardinality-balanced one")
    # Swaps keep every bin's cardinality, so a padded element matrix suffices.
    width = max((len(M) for M in start.sets), default=0)
    if n == 0 or width == 0:
        return Assignment(start.sets)
    card = np.array([len(M) for M in start.sets])
    valid = np.arange(width)[None, :] < card[:, None]
    elems = np.zeros((n, width), dtype=np.int64)
    for v, M in enumerate(start.sets):
        elems[v, :len(M)] = list(M)
    big = np.int64(1) << 40
    as_x = np.where(valid, elems, big)    # padding never below a real y
    as_y = np.where(valid, elems, 0)      # padding never above a real x
    sums = elems.sum(axis=1)

    def gaps_from(u: int) -> np.ndarray:
        # min positive y - x with x in bin u, y in bin v, for every v
        d = as_y[None, :, :] - as_x[u][:, None, None]
        d = np.where(d > 0, d, big)
        return d.min(axis=(0, 2))

    def gaps_into(u: int) -> np.ndarray:
        d = as_y[u][None, None, :] - as_x[:, :, None]
        d = np.where(d > 0, d, big)
        return d.min(axis=(1, 2))

    gap = np.stack([gaps_from(u) for u in range(n)])
    diff = sums[None, :] - sums[:, None]
    viol = (diff > 0) & (diff > gap)
    energy = int((sums * sums).sum())
    swaps = 0
    while True:
        flat = int(np.argmax(np.where(viol, sums[None, :] - sums[:, None], -1)))
        u, v = divmod(flat, n)
        if not viol[u, v]:
            break
        xs = sorted(set(elems[u, :card[u]].tolist()))
        ys = sorted(set(elems[v, :card[v]].tolist()))
        x, y = _best_swap(int(sums[v] - sums[u]), xs, ys)
        i = int(np.flatnonzero(elems[u, :card[u]] == x)[0])
        j = int(np.flatnonzero(elems[v, :card[v]] == y)[0])
        elems[u, i] = as_x[u, i] = as_y[u, i] = y
        elems[v, j] = as_x[v, j] = as_y[v, j] = x
        sums[u] += y - x
        sums[v] -= y - x
        new_energy = int((sums * sums).sum())
        if new_energy >= energy:
            raise InvariantBreach("equitable swap did not reduce the spread of vertex sums")
        energy = new_energy
        swaps += 1
        for w in (u, v):
            gap[w, :] = gaps_from(w)
            gap[:, w] = gaps_into(w)
        for w in (u, v):
            row = sums - sums[w]
            viol[w, :] = (row > 0) & (row > gap[w, :])
            col = sums[w] - sums
            viol[:, w] = (col > 0) & (col > gap[:, w])
    sets = tuple(IntMultiset(elems[v, :card[v]].tolist()) for v in range(n))
    return Assignment(sets, swaps)


# -- property checks ------------------------------------------------------------


def _stats(a: Assignment):
    sig = a.sums()
    card = a.sizes()
    big = np.iinfo(np.int64).max
    mn = np.array([M.min() if M else big for M in a.sets], dtype=np.int64)
    mx = np.array([M.max() if M else 0 for M in a.sets], dtype=np.int64)
    return sig, card, mn, mx


def greedy_violations(a: Assignment) -> list[str]:
    """Names of G1-G5 that fail on ``a`` (empty when all hold)."""
    sig, card, mn, mx = _stats(a)
    t = int(card.sum())
    out = []
    if not cardinality_balanced(a, t):
        out.append("G1")
    nonempty = card > 0
    sv, su = sig[:, None], sig[None, :]
    if (nonempty[:, None] & (sv > su + mn[:, None])).any():
        out.append("G2")
    if ((card[:, None] * su < (card[:, None] - 1) * sv) & nonempty[:, None]).any():
        out.append("G3")
    same = (card[:, None] == card[None, :]) & nonempty[:, None]
    if (same & (sv > su + mx[:, None] - mn[None, :])).any():
        out.append("G4")
    plus_one = card[:, None] == card[None, :] + 1
    if (plus_one & (sv <= su)).any():
        out.append("G5")
    return out


def e2_violation(a: Assignment) -> tuple[int, int, int, int] | None:
    """First ``(u, v, x, y)`` in row-major order breaking E2, or None."""
    distinct = [sorted(set(M)) for M in a.sets]
    sums = [M.sigma() for M in a.sets]
    for u in range(a.n):
        for v in range(a.n):
            pair = _crossed_pair(sums[u], distinct[u], sums[v], distinct[v])
            if pair is not None:
                return (u, v, *pair)
    return None


def equitable_violations(a: Assignment, m: int) -> list[str]:
    """Names of E1-E5 that fail on ``a`` for working bound ``m``."""
    sig, card, mn, mx = _stats(a)
    t = int(card.sum())
    out = []
    if not cardinality_balanced(a, t):
        out.append("E1")
    if e2_violation(a) is not None:
        out.append("E2")
    ceil_tn = -(-t // a.n)
    top = int(sig.max()) if len(sig) else 0
    for M, s in zip(a.sets, sig.tolist()):
        if any(top > max(ceil_tn * x, s + m - x) for x in M.counts()):
            out.append("E3")
            break
    sv, su = sig[:, None], sig[None, :]
    if (sv > su + m).any():
        out.append("E4")
    multi = card[:, None] >= 2
    if (multi & ((card[:, None] - 1) * sv > card[:, None] * su)).any():
        out.append("E5")
    return out


# -- compression ----------------------------------------------------------------


def _compress_case1(M: IntMultiset, m: int, k: int) -> IntMultiset:
    s = M.sigma()
    if not k * m < s <= (k + 2) * m:
        raise DomainError(f"case 1 compression needs {k}*{m} < {s} <= {k + 2}*{m}")
    j = k if s <= (k + 1) * m else k + 1
    return IntMultiset.from_runs([(m, j), (s - j * m, 1)])


def _compress_case2(M: IntMultiset, m: int, base: int) -> IntMultiset:
    """Keep ``base`` copies of ``m`` and split the rest into y and what remains."""
    s = M.sigma()
    if not base * m < s <= (base + 2) * m:
        raise DomainError(f"case 2 compression needs {base}*{m} < {s} <= {base + 2}*{m}")
    rest = s - base * m
    top = M.sigma_top(min(base + 1, len(M)))
    y = max(top - base * m, -(-rest // 2))
    runs = [(m, base), (y, 1)]
    if rest > y:
        runs.append((rest - y, 1))
    return IntMultiset.from_runs(runs)


def compress_odd(M: IntMultiset, m: int, ell: int, case1: bool, k: int = 0) -> IntMultiset:
    if case1:
        return _compress_case1(M, m, k)
    return _compress_case2(M, m, ell)


def compress_even(M: IntMultiset, m: int, ell: int, case1: bool, k: int = 0) -> IntMultiset:
    if case1:
        return _compress_case1(M, m, k)
    return _compress_case2(M, m, ell - 1)


def compression_ok(M: IntMultiset, star: IntMultiset, m: int) -> bool:
    """Same sum, dominating top-i sums, all elements in 1..m."""
    if star.sigma() != M.sigma() or (star and star.max() > m):
        return False
    pm, ps = M.prefix_sums(), star.prefix_sums()
    return all(ps[i] >= pm[min(i, len(M))] for i in range(1, len(star) + 1))


@dataclass(frozen=True)
class CompressionPlan:
    case1: bool
    k: int
    sets: tuple[IntMultiset, ...]


def compress_all(a: Assignment, m: int, lam: int) -> CompressionPlan:
    """Pick the case from the largest vertex sum and compress every vertex."""
    sums = [M.sigma() for M in a.sets]
    odd = lam % 2 == 1
    ell = (lam - 1) // 2 if odd else lam // 2
    threshold = (ell + 2) * m if odd else (ell + 1) * m
    case1 = max(sums) > threshold
    k = 0
    if case1:
        k = (min(sums) - 1) // m
        lowest = ell + 1 if odd else ell
        if k < lowest or max(sums) > (k + 2) * m:
            raise InvariantBreach(f"vertex sums {min(sums)}..{max(sums)} do not fit case 1 with m={m}")
    else:
        floor = ell * m if odd else (ell - 1) * m
        if min(sums) <= floor:
            raise InvariantBreach(f"a vertex sum {min(sums)} is at most {floor}")
    fn = compress_odd if odd else compress_even
    sets = tuple(fn(M, m, ell, case1, k) for M in a.sets)
    for M, S in zip(a.sets, sets):
        if not compression_ok(M, S, m):
            raise InvariantBreach(f"compression of {M!r} to {S!r} lost domination")
    return CompressionPlan(case1, k, sets)
