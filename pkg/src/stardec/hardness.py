"""Decomposition instances that encode a 3-partition instance.

For odd ``lam`` the parameters follow closed forms once ``n`` is fixed. For
even ``lam`` a small search over ``n``, a divisor ``x`` of ``n - q``, a prime
``p`` and a residue class for ``m`` finds integral parameters. Every returned
parameter set is re-checked with exact integer arithmetic.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any

from .decompose import DecompInstance, even_floor
from .errors import DomainError, InputError, InvariantBreach
from .multiset import IntMultiset
from .packing import CenterSpec


@dataclass(frozen=True)
class ThreePartitionInstance:
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if not vals or len(vals) % 3:
            raise InputError(f"3-partition needs 3q values, got {len(vals)}")
        for x in vals:
            if isinstance(x, bool) or not isinstance(x, int) or x < 1:
                raise InputError(f"3-partition values must be positive integers, got {x!r}")
        q = len(vals) // 3
        if sum(vals) % q:
            raise InputError(f"values sum to {sum(vals)}, not a multiple of q={q}")
        a = sum(vals) // q
        for x in vals:
            if not (4 * x > a and 2 * x < a):
                raise InputError(f"value {x} is not strictly between a/4 and a/2 for a={a}")

    @property
    def q(self) -> int:
        return len(self.values) // 3

    @property
    def a(self) -> int:
        return sum(self.values) // self.q

    @classmethod
    def parse(cls, text: str) -> "ThreePartitionInstance":
        try:
            values = tuple(int(t) for t in text.replace(" ", "").split(",") if t)
        except ValueError:
            raise InputError(f"cannot parse 3-partition values from {text!r}") from None
        return cls(values)


def solve_three_partition(tp: ThreePartitionInstance) -> list[tuple[int, int, int]] | None:
    """Index triples summing to ``a`` each, or None. Plain backtracking."""
    vals = tp.values
    a = tp.a
    used = [False] * len(vals)
    out: list[tuple[int, int, int]] = []

    def rec() -> bool:
        try:
            i = used.index(False)
        except ValueError:
            return True
        used[i] = True
        rest = [j for j in range(i + 1, len(vals)) if not used[j]]
        for j, k in combinations(rest, 2):
            if vals[i] + vals[j] + vals[k] == a:
                used[j] = used[k] = True
                out.append((i, j, k))
                if rec():
                    return True
                out.pop()
                used[j] = used[k] = False
        used[i] = False
        return False

    return list(out) if rec() else None


# -- odd lambda -----------------------------------------------------------------


@dataclass(frozen=True)
class HardOddParams:
    lam: int
    ell: int
    q: int
    a: int
    n: int
    m: int
    b: Fraction
    B: IntMultiset
    M: IntMultiset

    def to_json(self) -> dict:
        return {"lambda": self.lam, "ell": self.ell, "q": self.q, "a": self.a, "n": self.n, "m": self.m,
                "b": str(self.b), "B": self.B.to_json()}


def gen_hard_odd(lam: int, tp: ThreePartitionInstance) -> tuple[HardOddParams, DecompInstance]:
    if isinstance(lam, bool) or not isinstance(lam, int) or lam < 3 or lam % 2 == 0:
        raise DomainError(f"odd generator needs odd lambda >= 3, got {lam!r}")
    ell = (lam - 1) // 2
    q, a = tp.q, tp.a
    floor_n = 4 * (ell + 4) * (a + 1) * q
    n = floor_n + 1
    n += ((q + 1) - n) % (lam + 1)
    num = lam * (n - 1) + q
    if num % (lam + 1):
        raise InvariantBreach("congruence on n failed to make m integral")
    m = num // (lam + 1)
    b = ell * (n - m - 1) + Fraction(q - 1, 2) - (ell + 1) * q * a
    if q % 2:
        if b.denominator != 1:
            raise InvariantBreach(f"b={b} should be integral for odd q")
        B = IntMultiset.from_runs([(int(b), q)])
    else:
        if b.denominator != 2:
            raise InvariantBreach(f"b={b} should be a half-integer for even q")
        B = IntMultiset.from_runs([(math.ceil(b), q // 2), (math.floor(b), q // 2)])
    scaled = IntMultiset((ell + 1) * q * x for x in tp.values)
    M = IntMultiset.from_runs([(m, (ell + 1) * n - q)]) + scaled + B
    slack = (ell + 1) * q * a + Fraction(2 * ell + 1, 2) * (q - 1)
    if not m > math.ceil(b) + slack:
        raise InvariantBreach("m is not large enough relative to b")
    if not 2 * math.floor(b) > b + slack:
        raise InvariantBreach("b is not large enough relative to the scaled values")
    _check_sigma(M, lam, n)
    _check_above_q(M, q)
    params = HardOddParams(lam, ell, q, a, n, m, b, B, M)
    return params, DecompInstance(lam, n, M)


def odd_if_assignment(params: HardOddParams, tp: ThreePartitionInstance,
                      triples: list[tuple[int, int, int]]) -> CenterSpec:
    """Centre multisets realising the instance from a 3-partition solution."""
    ell, q, n, m = params.ell, params.q, params.n, params.m
    sets = []
    bs = [math.ceil(params.b)] * (q // 2) + [math.floor(params.b)] * (q - q // 2) if q % 2 == 0 \
        else [int(params.b)] * q
    for v in range(q):
        A = [(ell + 1) * q * tp.values[i] for i in triples[v]]
        sets.append(IntMultiset.from_runs([(m, ell), (bs[v], 1)]) + IntMultiset(A))
    sets.extend(IntMultiset.from_runs([(m, ell + 1)]) for _ in range(n - q))
    spec = CenterSpec(tuple(sets))
    _check_spec_matches(spec, params.M)
    return spec


# -- even lambda ----------------------------------------------------------------


@dataclass(frozen=True)
class HardEvenParams:
    lam: int
    ell: int
    q: int
    a: int
    n: int
    m: int
    r: int
    c: int
    b: int
    x: int
    p: int
    M: IntMultiset

    def to_json(self) -> dict:
        return {"lambda": self.lam, "ell": self.ell, "q": self.q, "a": self.a, "n": self.n, "m": self.m,
                "r": self.r, "c": self.c, "b": self.b, "x": self.x, "p": self.p}


@dataclass(frozen=True)
class SearchMiss:
    """No parameters up to the limit; ``constraint`` blocked the best candidate."""

    limit: int
    constraint: str
    candidates: int
    failures: dict = field(default_factory=dict)


def is_prime(k: int) -> bool:
    if k < 2:
        return False
    if k % 2 == 0:
        return k == 2
    d = 3
    while d * d <= k:
        if k % d == 0:
            return False
        d += 2
    return True


def _next_prime(k: int) -> int:
    while not is_prime(k):
        k += 1
    return k


def _divisors_near_root(N: int) -> list[int]:
    divs = set()
    for d in range(1, math.isqrt(N) + 1):
        if N % d == 0:
            divs.update((d, N // d))
    root = math.sqrt(N)
    return sorted(divs, key=lambda d: (abs(d - root), d))


EVEN_CONSTRAINTS = (
    "l*q < r < n-q",
    "q < m < n-1",
    "c integral",
    "2c > m+q",
    "l(c-q) > (l-1)(m-q)",
    "m > c+b+(l+1)qa",
    "b > (l+1)qa + l(q-1)",
    "elements exceed q",
    "m > alpha'(n-1)",
)


def even_constraint_failures(lam: int, tp: ThreePartitionInstance, n: int, m: int, r: int) -> tuple[list[str], int | None, int | None]:
    """Constraint names that fail for ``(n, m, r)``, plus ``c`` and ``b`` when integral."""
    ell = lam // 2
    q, a = tp.q, tp.a
    bad = []
    if not ell * q < r < n - q:
        bad.append(EVEN_CONSTRAINTS[0])
    if not q < m < n - 1:
        bad.append(EVEN_CONSTRAINTS[1])
    num = ell * (n - q) * (n - q - 1) - r * (m - q)
    den = (ell + 1) * (n - q) - 2 * r
    if den <= 0 or num % den:
        bad.append(EVEN_CONSTRAINTS[2])
        return bad, None, None
    c = num // den + q
    b = (ell - 1) * (n - c - 1) + r + q - c - 1 - (ell + 1) * q * a
    if not 2 * c > m + q:
        bad.append(EVEN_CONSTRAINTS[3])
    if not ell * (c - q) > (ell - 1) * (m - q):
        bad.append(EVEN_CONSTRAINTS[4])
    if not m > c + b + (ell + 1) * q * a:
        bad.append(EVEN_CONSTRAINTS[5])
    if not b > (ell + 1) * q * a + ell * (q - 1):
        bad.append(EVEN_CONSTRAINTS[6])
    if not min(m, c, b, (ell + 1) * q * min(tp.values)) > q:
        bad.append(EVEN_CONSTRAINTS[7])
    if not m > even_floor(lam, n - 1):
        bad.append(EVEN_CONSTRAINTS[8])
    return bad, c, b


def _even_candidates(lam: int, tp: ThreePartitionInstance, n: int, primes_per_x: int):
    """Yield ``(r, m, x, p)`` with integral ``c`` for this ``n``."""
    ell = lam // 2
    q = tp.q
    N1 = n - q
    m_floor = max(q + 1, even_floor(lam, n - 1) + 1)
    for x in _divisors_near_root(N1):
        # smallest prime p with p >= (n-1)/(x*sqrt 2), i.e. 2 p^2 x^2 >= (n-1)^2
        p = max(2, math.isqrt((n - 1) ** 2 // (2 * x * x)))
        while 2 * p * p * x * x < (n - 1) ** 2:
            p += 1
        p = _next_prime(p)
        for _ in range(primes_per_x):
            r = p * x
            zx = (ell + 1) * N1 - 2 * r
            if zx > 0:
                z = zx // x
                T = ell * N1 * (N1 - 1) // x
                g = math.gcd(p, z)
                if T % g == 0:
                    zg = z // g
                    gamma = (T // g) * pow(p // g, -1, zg) % zg if zg > 1 else 0
                    # smallest m = q + gamma + j*zg at or above m_floor
                    start = q + gamma
                    if start < m_floor:
                        start += -(-(m_floor - start) // zg) * zg
                    for m in range(start, n - 1, zg):
                        yield r, m, x, p
            p = _next_prime(p + 1)


def gen_hard_even(lam: int, tp: ThreePartitionInstance, search_limit: int = 5000,
                  primes_per_x: int = 3) -> tuple[HardEvenParams, DecompInstance] | SearchMiss:
    """Smallest ``n`` (then ``r``, then ``m``) found by the divisor/prime search, up to ``search_limit``."""
    if isinstance(lam, bool) or not isinstance(lam, int) or lam < 2 or lam % 2:
        raise DomainError(f"even generator needs even lambda >= 2, got {lam!r}")
    ell = lam // 2
    q, a = tp.q, tp.a
    failures: Counter = Counter()
    best_fail = ("no candidate with integral c", -1)
    tried = 0
    for n in range(q + 3, search_limit + 1):
        found = []
        for r, m, x, p in _even_candidates(lam, tp, n, primes_per_x):
            tried += 1
            bad, c, b = even_constraint_failures(lam, tp, n, m, r)
            if bad:
                failures[bad[0]] += 1
                passed = len(EVEN_CONSTRAINTS) - len(bad)
                if passed > best_fail[1]:
                    best_fail = (bad[0], passed)
                continue
            found.append((r, m, x, p, c, b))
        if found:
            r, m, x, p, c, b = min(found)
            M = IntMultiset.from_runs([(m, r), (c, (ell + 1) * n - 2 * r - q), (b, q)]) + \
                IntMultiset((ell + 1) * q * v for v in tp.values)
            _check_sigma(M, lam, n)
            _check_above_q(M, q)
            params = HardEvenParams(lam, ell, q, a, n, m, r, c, b, x, p, M)
            return params, DecompInstance(lam, n, M)
    return SearchMiss(search_limit, best_fail[0], tried, dict(failures))


def even_if_assignment(params: HardEvenParams, tp: ThreePartitionInstance,
                       triples: list[tuple[int, int, int]]) -> CenterSpec:
    ell, q, n, r, m, c, b = params.ell, params.q, params.n, params.r, params.m, params.c, params.b
    sets = []
    for v in range(q):
        A = [(ell + 1) * q * tp.values[i] for i in triples[v]]
        sets.append(IntMultiset.from_runs([(c, ell), (b, 1)]) + IntMultiset(A))
    sets.extend(IntMultiset.from_runs([(m, 1), (c, ell - 1)]) for _ in range(r))
    sets.extend(IntMultiset.from_runs([(c, ell + 1)]) for _ in range(n - r - q))
    spec = CenterSpec(tuple(sets))
    _check_spec_matches(spec, params.M)
    return spec


# -- shared checks --------------------------------------------------------------


def _check_sigma(M: IntMultiset, lam: int, n: int) -> None:
    if M.sigma() != lam * (n * (n - 1) // 2):
        raise InvariantBreach(f"sizes sum to {M.sigma()}, expected {lam * (n * (n - 1) // 2)}")


def _check_above_q(M: IntMultiset, q: int) -> None:
    if M and M.min() <= q:
        raise InvariantBreach(f"size {M.min()} does not exceed q={q}")


def _check_spec_matches(spec: CenterSpec, M: IntMultiset) -> None:
    total = IntMultiset()
    for S in spec.sets:
        total = total + S
    if total != M:
        raise InvariantBreach("if-direction assignment does not use exactly the instance sizes")


def params_json(params: Any) -> dict:
    return params.to_json()
