import pytest
from hypothesis import given
from hypothesis import strategies as st

from stardec.errors import DomainError, InputError
from stardec.multiset import IntMultiset, sigma, sigma_top

values = st.lists(st.integers(1, 50), max_size=30)


def test_sigma_examples():
    assert sigma(IntMultiset()) == 0
    assert sigma(IntMultiset([9, 5])) == 14
    big = IntMultiset.from_runs([(121, 323)]) + IntMultiset([26, 4, 4, 6])
    assert sigma(big) == 39123


def test_sigma_top_examples():
    assert sigma_top(IntMultiset([9, 5]), 1) == 9
    assert sigma_top(IntMultiset([9, 5, 1]), 0) == 0
    assert sigma_top(IntMultiset([121, 26, 14]), 2) == 147


def test_sigma_top_range():
    with pytest.raises(DomainError):
        IntMultiset([1, 2]).sigma_top(3)
    with pytest.raises(DomainError):
        IntMultiset([1]).sigma_top(-1)


@pytest.mark.parametrize("bad", [[0], [-3], [1.5], ["2"], [True]])
def test_rejects_non_positive_or_non_integer(bad):
    with pytest.raises(InputError):
        IntMultiset(bad)


def test_json_forms():
    M = IntMultiset([5, 9, 5])
    assert M.to_json() == [[9, 1], [5, 2]]
    assert IntMultiset.from_json([9, 5, 5]) == M
    assert IntMultiset.from_json([[9, 1], [5, 2]]) == M
    with pytest.raises(InputError):
        IntMultiset.from_json([[9, 1], 5])
    with pytest.raises(InputError):
        IntMultiset.from_json({"a": 1})


def test_remove_missing_element():
    with pytest.raises(DomainError):
        IntMultiset([3]).remove(4)


@given(values)
def test_sigma_top_is_sorted_prefix(xs):
    M = IntMultiset(xs)
    desc = sorted(xs, reverse=True)
    for i in range(len(xs) + 1):
        assert M.sigma_top(i) == sum(desc[:i])
    assert M.prefix_sums() == [M.sigma_top(i) for i in range(len(xs) + 1)]


@given(values, values)
def test_add_sub_roundtrip(xs, ys):
    A, B = IntMultiset(xs), IntMultiset(ys)
    assert (A + B) - B == A
    assert (A + B).sigma() == A.sigma() + B.sigma()
    assert A.issubset(A + B)


@given(values)
def test_json_roundtrip_and_hash(xs):
    M = IntMultiset(xs)
    again = IntMultiset.from_json(M.to_json())
    assert again == M and hash(again) == hash(M)
    assert sorted(M, reverse=True) == list(M)
