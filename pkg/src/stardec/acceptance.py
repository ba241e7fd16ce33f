"""The acceptance suite: one function per criterion, each returning a pass/fail record.

Used by ``tests/test_acceptance.py`` and ``stardec selftest``. Every
function is deterministic for a given seed.
"""

from __future__ import annotations

import random
import time
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, permutations, product
from math import comb

import numpy as np

from . import golden
from .assignment import greedy_assign
from .decompose import DecompInstance, decide_small, decompose, even_admits, even_floor, verify
from .hardness import (
    EVEN_CONSTRAINTS,
    SearchMiss,
    ThreePartitionInstance,
    even_constraint_failures,
    even_if_assignment,
    gen_hard_even,
    gen_hard_odd,
    odd_if_assignment,
    solve_three_partition,
)
from .maxflow import check_flow, max_flow
from .multigraph import Multigraph, StarPacking, complete_multigraph, coverage_check
from .multiset import IntMultiset
from .oracle import min_delta, naive_max_flow, oracle_decompose, oracle_pack, oracle_tournament
from .packing import CenterSpec, Certificate, delta_eval, pack_with_centers
from .sampling import random_below_threshold, random_multigraph, random_network, random_spec
from .tournament import TournamentSpec, realize_tournament, tournament_feasible, verify_tournament


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    budget: float | None

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        limit = f" / {self.budget:.0f}s" if self.budget else ""
        return f"[{tag}] criterion {self.number}: {self.title} ({self.seconds:.1f}s{limit}) {self.detail}"


def _timed(number: int, title: str, budget: float | None, body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as exc:  # a crash is a failure, reported with its type
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    if ok and budget is not None and dt > budget:
        ok, detail = False, f"{detail}; over the {budget:.0f}s runtime budget"
    return CriterionResult(number, title, ok, detail, dt, budget)


# -- 1. packing characterisation, exhaustive + random ---------------------------


def _partitions(total: int, largest: int) -> Iterator[tuple[int, ...]]:
    """Partitions of ``total`` into parts at most ``largest``, parts descending."""
    if total == 0:
        yield ()
        return
    for first in range(min(total, largest), 0, -1):
        for rest in _partitions(total - first, first):
            yield (first,) + rest


def _graph_orbits(n: int, max_mu: int):
    """Canonical multiplicity vectors under vertex relabelling, with automorphisms."""
    pairs = list(combinations(range(n), 2))
    index = {p: i for i, p in enumerate(pairs)}
    perms = list(permutations(range(n)))
    maps = [[index[tuple(sorted((p[u], p[v])))] for u, v in pairs] for p in perms]

    def image(mu, m):
        out = [0] * len(mu)
        for i, j in enumerate(m):
            out[j] = mu[i]
        return tuple(out)

    for mu in product(range(max_mu + 1), repeat=len(pairs)):
        images = [image(mu, m) for m in maps]
        if min(images) != mu:
            continue
        auts = [p for p, im in zip(perms, images) if im == mu]
        yield pairs, mu, auts


def _spec_orbits(n: int, degs: list[int], cap: int, auts) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Specs with sizes at most each centre's distinct-neighbour count, total at most ``cap``,
    one per orbit of the graph's automorphism group."""
    per_vertex = [[p for t in range(cap + 1) for p in _partitions(t, degs[v])] if degs[v] else [()] for v in range(n)]

    def rec(v: int, left: int, acc: list):
        if v == n:
            yield tuple(acc)
            return
        for p in per_vertex[v]:
            s = sum(p)
            if s <= left:
                acc.append(p)
                yield from rec(v + 1, left - s, acc)
                acc.pop()

    for spec in rec(0, cap, []):
        if all(tuple(spec[p.index(v)] for v in range(n)) >= spec for p in auts):
            yield spec


def _three_way(g: Multigraph, spec: CenterSpec) -> tuple[bool, bool, bool]:
    flow = isinstance(pack_with_centers(g, spec), StarPacking)
    oracle = oracle_pack(g, spec).feasible
    delta = min_delta(g, spec)[0] >= 0
    return flow, oracle, delta


def criterion_1(seed: int = 0, random_count: int = 5000, trivial_sample: int = 2000) -> CriterionResult:
    def body():
        checked = 0
        mismatches = []
        for n in range(1, 5):
            for pairs, mu, auts in _graph_orbits(n, 2):
                g = Multigraph(n, {p: m for p, m in zip(pairs, mu) if m})
                degs = [sum(1 for (a, b), m in zip(pairs, mu) if m and v in (a, b)) for v in range(n)]
                for spec in _spec_orbits(n, degs, min(12, sum(mu)), auts):
                    cs = CenterSpec(tuple(IntMultiset(p) for p in spec))
                    r = _three_way(g, cs)
                    checked += 1
                    if len(set(r)) != 1:
                        mismatches.append((n, mu, spec, r))
        # specs outside the grid above: some size exceeds its centre's neighbour count, or total exceeds the edges
        rng = random.Random(f"{seed}:trivial")
        trivial = 0
        while trivial < trivial_sample:
            n = rng.randint(1, 4)
            g = random_multigraph(rng, n, 2)
            cs = random_spec(rng, n, 12, max_size=12)
            degs = [len(g.neighbors(v)) for v in range(n)]
            if cs.total() <= g.total_edges() and all(not M or M.max() <= degs[v] for v, M in enumerate(cs.sets)):
                continue
            r = _three_way(g, cs)
            trivial += 1
            if r != (False, False, False):
                mismatches.append((n, g, cs, r))
        rng = random.Random(f"{seed}:random")
        for _ in range(random_count):
            n = rng.randint(2, 6)
            g = random_multigraph(rng, n, 3)
            cs = random_spec(rng, n, 40, max_functions=200_000)
            r = _three_way(g, cs)
            if len(set(r)) != 1:
                mismatches.append((n, g, cs, r))
        detail = f"{checked} exhaustive orbit reps, {trivial} out-of-grid samples, {random_count} random; {len(mismatches)} mismatches"
        if mismatches:
            detail += f"; first {mismatches[0]!r}"
        return not mismatches, detail

    return _timed(1, "packing verdict == edge oracle == min Delta >= 0", 120, body)


# -- 2. 2K_10 ------------------------------------------------------------------------


def criterion_2() -> CriterionResult:
    def body():
        g, spec = golden.pack_2k10()
        out = pack_with_centers(g, spec)
        if not isinstance(out, Certificate):
            return False, "pack reported feasible"
        d = delta_eval(g, spec, out.f).delta
        lo, f = min_delta(g, spec)
        ok = d < 0 and lo == golden.PACK_2K10_MIN_DELTA
        return ok, f"certificate Delta_f={d}, enumerated min Delta={lo} at f={f}"

    return _timed(2, "2K_10 certificate", 1, body)


# -- 3. 4K_100 ------------------------------------------------------------------------


def criterion_3() -> CriterionResult:
    def body():
        inst = golden.decomp_4k100()
        d = decompose(inst)
        ok_d = verify(inst, d)
        a = greedy_assign(inst.sizes, inst.n)
        shapes = sorted(a.sets, key=len)
        pair = [M for M in a.sets if len(M) == 2 and M != IntMultiset([90, 90])]
        shape_ok = (pair == [IntMultiset([90, 73])]
                    and all(M == IntMultiset([90, 90]) or len(M) >= 3 for M in a.sets if M is not pair[0]))
        out = pack_with_centers(inst.host, CenterSpec(a.sets))
        cert_ok = isinstance(out, Certificate) and delta_eval(inst.host, CenterSpec(a.sets), out.f).delta < 0
        detail = (f"decomposition verified={ok_d} ({len(d)} stars); greedy assignment shape matches={shape_ok}"
                  f" (smallest set {sorted(shapes[0])}); certificate Delta_f="
                  f"{out.delta if isinstance(out, Certificate) else 'none'}")
        return ok_d and shape_ok and cert_ok, detail

    return _timed(3, "4K_100 decomposition and failing assignment", 10, body)


# -- 4. below threshold ------------------------------------------------------------


def criterion_4(seed: int = 0, per_lambda: int = 200) -> CriterionResult:
    def body():
        rng = random.Random(f"{seed}:below")
        bad = []
        for lam in range(2, 8):
            for _ in range(per_lambda):
                inst = random_below_threshold(rng, lam, rng.randint(10, 200))
                try:
                    ok = verify(inst, decompose(inst))
                except Exception as exc:  # counted, not raised
                    ok = False
                    bad.append((lam, inst.n, repr(exc)))
                    continue
                if not ok:
                    bad.append((lam, inst.n, "verify failed"))
        return not bad, f"{6 * per_lambda} instances, {len(bad)} failures" + (f"; first {bad[0]}" if bad else "")

    return _timed(4, "below-threshold decompositions", 300, body)


# -- 5. exact small decision -------------------------------------------------------


def criterion_5() -> CriterionResult:
    def body():
        checked = 0
        bad = []
        for lam in (2, 3):
            for n in range(1, 6):
                total = lam * comb(n, 2)
                for parts in _partitions(total, max(n - 1, 0)) if n > 1 else [()]:
                    inst = DecompInstance(lam, n, IntMultiset(parts))
                    flow = decide_small(inst) is not None
                    orc = oracle_decompose(inst).feasible
                    checked += 1
                    if flow != orc:
                        bad.append((lam, n, parts, flow, orc))
        return not bad, f"{checked} size multisets, {len(bad)} disagreements" + (f"; first {bad[0]}" if bad else "")

    return _timed(5, "assignment enumeration + flow == decomposition oracle", 300, body)


# -- 6. tournaments ------------------------------------------------------------------


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def criterion_6() -> CriterionResult:
    def body():
        checked = feasible = 0
        bad = []
        for lam in (1, 2):
            for n in range(1, 5):
                for a in _compositions(lam * comb(n, 2), n):
                    for b in product(*(range(x + 1) for x in a)):
                        spec = TournamentSpec(lam, a, b)
                        verdict = tournament_feasible(spec).feasible
                        orc = oracle_tournament(spec).feasible
                        checked += 1
                        if verdict != orc:
                            bad.append((lam, a, b, verdict, orc))
                            continue
                        if verdict:
                            feasible += 1
                            if not verify_tournament(spec, realize_tournament(spec)):
                                bad.append((lam, a, b, "realization failed"))
        return not bad, f"{checked} specs ({feasible} feasible, all realized), {len(bad)} problems" + (
            f"; first {bad[0]}" if bad else "")

    return _timed(6, "tournament condition == orientation oracle", 120, body)


# -- 7, 8. hardness generators -------------------------------------------------------


def _pack_verifies(lam: int, n: int, spec: CenterSpec) -> bool:
    out = pack_with_centers(complete_multigraph(lam, n), spec)
    return isinstance(out, StarPacking) and bool(coverage_check(out, exact=True))


def criterion_7() -> CriterionResult:
    def body():
        tp = ThreePartitionInstance((2, 2, 3))
        p, inst = gen_hard_odd(3, tp)
        sigma = inst.sizes.sigma()
        values_ok = (p.n, p.m, p.b, sigma) == (162, 121, 26, 39123) and sigma == 3 * comb(162, 2)
        spec = odd_if_assignment(p, tp, solve_three_partition(tp))
        packed = _pack_verifies(3, p.n, spec)
        return values_ok and packed, f"n={p.n} m={p.m} b={p.b} sigma={sigma}; if-direction packs and verifies={packed}"

    return _timed(7, "odd hardness instance", 30, body)


def criterion_8(search_limit: int = 5000) -> CriterionResult:
    def body():
        tp = ThreePartitionInstance((2, 2, 3))
        triples = solve_three_partition(tp)
        notes = []
        ok = True
        for lam in (2, 4):
            out = gen_hard_even(lam, tp, search_limit)
            if isinstance(out, SearchMiss):
                ok = False
                notes.append(f"lambda={lam}: not found (tightest: {out.constraint})")
                continue
            p, inst = out
            failures, c, b = even_constraint_failures(lam, tp, p.n, p.m, p.r)
            ell = lam // 2
            identity = (p.m * p.r + c * ((ell + 1) * p.n - 2 * p.r - tp.q) + b * tp.q
                        + (ell + 1) * tp.q * sum(tp.values))
            sigma_ok = inst.sizes.sigma() == identity == lam * comb(p.n, 2)
            packed = _pack_verifies(lam, p.n, even_if_assignment(p, tp, triples))
            ok &= not failures and sigma_ok and packed
            notes.append(f"lambda={lam}: n={p.n} m={p.m} r={p.r} c={c} b={b}, "
                         f"{len(EVEN_CONSTRAINTS) - len(failures)}/{len(EVEN_CONSTRAINTS)} constraints, "
                         f"sigma ok={sigma_ok}, packs={packed}")
        return ok, "; ".join(notes)

    return _timed(8, "even hardness instances", 120, body)


# -- 9. flow engine --------------------------------------------------------------------


def criterion_9(seed: int = 0, count: int = 1000) -> CriterionResult:
    def body():
        rng = random.Random(f"{seed}:flow")
        bad = 0
        for i in range(count):
            net = random_network(rng, max_nodes=14, max_arcs=60)
            ref = naive_max_flow(net)
            for engine in ("dinic", "scipy"):
                res = max_flow(net, engine)
                try:
                    check_flow(net, res)
                except AssertionError:
                    bad += 1
                    continue
                if res.value != ref or res.cut_capacity(net) != res.value:
                    bad += 1
        return bad == 0, f"{count} networks x 2 engines, {bad} failures"

    return _timed(9, "max flow == min cut == reference", 60, body)


# -- 10. threshold arithmetic ----------------------------------------------------------


def criterion_10(seed: int = 0, points: int = 100_000) -> CriterionResult:
    def body():
        rng = np.random.default_rng(seed)
        lams = np.arange(2, 21, 2)
        one, two, three = np.longdouble(1), np.longdouble(2), np.longdouble(3)
        alpha = {int(l): one - (two / np.longdouble(int(l))) * (three - two * np.sqrt(np.longdouble(2))) for l in lams}
        bad = []
        checked = 0
        lam_draw = rng.choice(lams, size=points)
        n_draw = rng.integers(2, 10**6 + 1, size=points)
        for lam, n in zip(lam_draw.tolist(), n_draw.tolist()):
            R = n - 1
            fl = even_floor(lam, R)
            cand = {fl - 1, fl, fl + 1, int(rng.integers(0, R + 2))}
            for m in cand:
                exact = even_admits(lam, m, R)
                approx = bool(np.longdouble(m) <= alpha[lam] * np.longdouble(R))
                checked += 1
                if exact != approx:
                    bad.append((lam, n, m, exact, approx))
            if not (even_admits(lam, fl, R) and not even_admits(lam, fl + 1, R)):
                bad.append((lam, n, fl, "floor"))
        return not bad, f"{checked} comparisons, {len(bad)} disagreements" + (f"; first {bad[0]}" if bad else "")

    return _timed(10, "exact even threshold vs 80-bit float", None, body)


CRITERIA: dict[int, Callable[..., CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}


def run_all(seed: int = 0, only: list[int] | None = None, echo: Callable[[str], None] | None = print) -> list[CriterionResult]:
    out = []
    for k, fn in CRITERIA.items():
        if only and k not in only:
            continue
        kwargs = {"seed": seed} if "seed" in fn.__code__.co_varnames else {}
        r = fn(**kwargs)
        if echo:
            echo(r.line())
        out.append(r)
    return out
