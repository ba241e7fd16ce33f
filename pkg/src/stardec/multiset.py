"""Immutable multisets of positive integers.

Elements are kept as run-length pairs ``(value, multiplicity)`` sorted by
descending value, so prefix sums of the iteration order are exactly the
"sum of the i largest elements" statistic used throughout the package.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Iterator, Mapping
from typing import Any

from .errors import DomainError, InputError

#: Inputs whose element sum would exceed this are rejected.
SIGMA_LIMIT = 2**62


class IntMultiset:
    __slots__ = ("_runs", "_size", "_sigma", "_hash")

    def __init__(self, values: Iterable[int] = ()):
        counts = Counter()
        for v in values:
            counts[_check_value(v)] += 1
        self._set_runs(counts)

    @classmethod
    def from_runs(cls, runs: Iterable[tuple[int, int]]) -> "IntMultiset":
        counts: Counter = Counter()
        for value, mult in runs:
            value = _check_value(value)
            if isinstance(mult, bool) or not isinstance(mult, int) or mult < 0:
                raise InputError(f"multiplicity must be a nonnegative integer, got {mult!r}")
            if mult:
                counts[value] += mult
        obj = cls.__new__(cls)
        obj._set_runs(counts)
        return obj

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> "IntMultiset":
        return cls.from_runs(counts.items())

    def _set_runs(self, counts: Mapping[int, int]) -> None:
        runs = tuple(sorted(((v, c) for v, c in counts.items() if c), reverse=True))
        sigma = sum(v * c for v, c in runs)
        if sigma > SIGMA_LIMIT:
            raise InputError(f"multiset sum {sigma} exceeds 2^62")
        self._runs = runs
        self._size = sum(c for _, c in runs)
        self._sigma = sigma
        self._hash = None

    # -- basic protocol -------------------------------------------------

    @property
    def runs(self) -> tuple[tuple[int, int], ...]:
        """``(value, multiplicity)`` pairs, largest value first."""
        return self._runs

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[int]:
        for value, mult in self._runs:
            for _ in range(mult):
                yield value

    def __bool__(self) -> bool:
        return self._size > 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMultiset):
            return NotImplemented
        return self._runs == other._runs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._runs)
        return self._hash

    def __lt__(self, other: "IntMultiset") -> bool:
        # Total order used only for canonical sorting.
        return tuple(self) < tuple(other)

    def __repr__(self) -> str:
        body = ", ".join(str(v) if c == 1 else f"{v}^[{c}]" for v, c in self._runs)
        return "{" + body + "}"

    def __contains__(self, value: object) -> bool:
        return any(v == value for v, _ in self._runs)

    # -- statistics -----------------------------------------------------

    def sigma(self) -> int:
        return self._sigma

    def sigma_top(self, i: int) -> int:
        """Sum of the ``i`` largest elements, counted with multiplicity."""
        if isinstance(i, bool) or not isinstance(i, int) or not 0 <= i <= self._size:
            raise DomainError(f"sigma_top index {i!r} outside 0..{self._size}")
        total = 0
        for value, mult in self._runs:
            if i <= 0:
                break
            take = mult if mult < i else i
            total += value * take
            i -= take
        return total

    def prefix_sums(self) -> list[int]:
        """``[sigma_top(0), ..., sigma_top(len)]`` in one pass."""
        out = [0]
        for value in self:
            out.append(out[-1] + value)
        return out

    def nu(self, x: int) -> int:
        for value, mult in self._runs:
            if value == x:
                return mult
        return 0

    def nu_set(self, values: Iterable[int]) -> int:
        wanted = set(values)
        return sum(mult for value, mult in self._runs if value in wanted)

    def max(self) -> int:
        if not self._runs:
            raise DomainError("max of an empty multiset")
        return self._runs[0][0]

    def min(self) -> int:
        if not self._runs:
            raise DomainError("min of an empty multiset")
        return self._runs[-1][0]

    def counts(self) -> dict[int, int]:
        return dict(self._runs)

    def issubset(self, other: "IntMultiset") -> bool:
        theirs = other.counts()
        return all(theirs.get(v, 0) >= c for v, c in self._runs)

    # -- algebra --------------------------------------------------------

    def __add__(self, other: "IntMultiset") -> "IntMultiset":
        if not isinstance(other, IntMultiset):
            return NotImplemented
        counts = Counter(self.counts())
        counts.update(other.counts())
        return IntMultiset.from_counts(counts)

    def __sub__(self, other: "IntMultiset") -> "IntMultiset":
        if not isinstance(other, IntMultiset):
            return NotImplemented
        theirs = other.counts()
        return IntMultiset.from_runs((v, max(0, c - theirs.get(v, 0))) for v, c in self._runs)

    def add(self, value: int, mult: int = 1) -> "IntMultiset":
        return self + IntMultiset.from_runs([(value, mult)])

    def remove(self, value: int, mult: int = 1) -> "IntMultiset":
        if self.nu(value) < mult:
            raise DomainError(f"cannot remove {mult} copies of {value} from {self!r}")
        return self - IntMultiset.from_runs([(value, mult)])

    # -- JSON -----------------------------------------------------------

    def to_json(self) -> list[list[int]]:
        return [[v, c] for v, c in self._runs]

    @classmethod
    def from_json(cls, obj: Any) -> "IntMultiset":
        """Accept ``[9, 5, 1]`` or run-length pairs ``[[121, 323], [26, 1]]``."""
        if not isinstance(obj, list):
            raise InputError(f"multiset must be a JSON array, got {type(obj).__name__}")
        if all(isinstance(x, list) for x in obj):
            for x in obj:
                if len(x) != 2:
                    raise InputError(f"run-length entry must be [value, count], got {x!r}")
            return cls.from_runs((x[0], x[1]) for x in obj)
        if any(isinstance(x, list) for x in obj):
            raise InputError("multiset array mixes plain values and run-length pairs")
        return cls(obj)


def _check_value(v: Any) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(f"multiset elements must be integers, got {v!r}")
    if v < 1:
        raise InputError(f"multiset elements must be positive, got {v}")
    return v


def sigma(M: IntMultiset) -> int:
    return M.sigma()


def sigma_top(M: IntMultiset, i: int) -> int:
    return M.sigma_top(i)
