from itertools import combinations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stardec.errors import InputError
from stardec.oracle import oracle_tournament
from stardec.tournament import (
    Tournament,
    TournamentSpec,
    landau_feasible,
    realize_tournament,
    tournament_feasible,
    verify_tournament,
)


def test_regular_tournament_feasible():
    assert tournament_feasible(TournamentSpec(1, (1, 1, 1), (0, 0, 0)))


def test_three_zero_zero_infeasible_at_k1():
    v = tournament_feasible(TournamentSpec(1, (3, 0, 0), (0, 0, 0)))
    assert not v and v.k == 1
    assert v.lhs == 2 * 3 and v.rhs == 2 * 2


def test_two_fold_tight():
    spec = TournamentSpec(2, (2, 2, 2), (2, 2, 2))
    assert tournament_feasible(spec)
    t = realize_tournament(spec)
    assert verify_tournament(spec, t)
    assert all(t.out[u][v] == 1 for u in range(3) for v in range(3) if u != v)


def test_single_edge():
    t = realize_tournament(TournamentSpec(1, (1, 0), (1, 0)))
    assert t.out == ((0, 1), (0, 0))


def test_transitive():
    spec = TournamentSpec(1, (3, 2, 1, 0), (0, 0, 0, 0))
    assert verify_tournament(spec, realize_tournament(spec))


def test_flip_breaks_tight_instance():
    spec = TournamentSpec(2, (2, 2, 2), (2, 2, 2))
    t = realize_tournament(spec)
    out = [list(r) for r in t.out]
    out[0][1] += 1
    out[1][0] -= 1
    assert not verify_tournament(spec, Tournament(2, tuple(tuple(r) for r in out)))


def test_spec_validation():
    with pytest.raises(InputError):
        TournamentSpec(1, (1, 1, 0), (0, 0, 0))
    with pytest.raises(InputError):
        TournamentSpec(1, (1, 1, 1), (2, 0, 0))
    with pytest.raises(InputError):
        TournamentSpec(0, (), ())
    spec = TournamentSpec.from_json({"lambda": 1, "a": [1, 1, 1]})
    assert spec.b == (0, 0, 0)


def test_exhaustive_n3_lambda1_verifier():
    # every orientation of K_3, checked against the verdict for its own score vector
    pairs = list(combinations(range(3), 2))
    accepted = set()
    for choice in product((0, 1), repeat=3):
        out = [[0] * 3 for _ in range(3)]
        for (u, v), x in zip(pairs, choice):
            out[u][v], out[v][u] = x, 1 - x
        t = Tournament(1, tuple(tuple(r) for r in out))
        for b in product(range(3), repeat=3):
            a = tuple(sum(r) for r in out)
            if all(x >= y for x, y in zip(a, b)):
                spec = TournamentSpec(1, a, b)
                if verify_tournament(spec, t):
                    accepted.add((a, b))
    for a in product(range(3), repeat=3):
        if sum(a) != 3:
            continue
        for b in product(*(range(x + 1) for x in a)):
            assert ((a, b) in accepted) == tournament_feasible(TournamentSpec(1, a, b)).feasible


@given(st.integers(1, 3), st.integers(2, 5), st.data())
def test_landau_matches_b_zero(lam, n, data):
    total = lam * n * (n - 1) // 2
    cuts = sorted(data.draw(st.lists(st.integers(0, total), min_size=n - 1, max_size=n - 1)))
    a = tuple(y - x for x, y in zip([0] + cuts, cuts + [total]))
    spec = TournamentSpec(lam, a, (0,) * n)
    assert landau_feasible(lam, a).feasible == tournament_feasible(spec).feasible


@given(st.integers(1, 2), st.integers(2, 4), st.data())
def test_verdict_matches_oracle_and_realizes(lam, n, data):
    total = lam * n * (n - 1) // 2
    cuts = sorted(data.draw(st.lists(st.integers(0, total), min_size=n - 1, max_size=n - 1)))
    a = tuple(y - x for x, y in zip([0] + cuts, cuts + [total]))
    b = tuple(data.draw(st.integers(0, x)) for x in a)
    spec = TournamentSpec(lam, a, b)
    v = tournament_feasible(spec)
    assert v.feasible == oracle_tournament(spec).feasible
    if v:
        assert verify_tournament(spec, realize_tournament(spec))
