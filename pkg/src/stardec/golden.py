"""Embedded reference instances, so the self-test needs no external files."""

from __future__ import annotations

from .decompose import DecompInstance
from .multigraph import complete_multigraph
from .multiset import IntMultiset
from .packing import CenterSpec

#: 2K_10 with two {9,5}, four {9,1} and four {5} centres. Infeasible, min Delta = -2.
PACK_2K10 = {
    "n": 10,
    "lambda": 2,
    "centers": {
        "0": [9, 5], "1": [9, 5],
        "2": [9, 1], "3": [9, 1], "4": [9, 1], "5": [9, 1],
        "6": [5], "7": [5], "8": [5], "9": [5],
    },
}
PACK_2K10_MIN_DELTA = -2
PACK_2K10_F = (2, 2, 1, 1, 1, 1, 0, 0, 0, 0)

#: 4K_100 into 166 stars of size 90, 36 of size 73 and 31 of size 72.
SIZES_4K100 = [[90, 166], [73, 36], [72, 31]]


def pack_2k10():
    return complete_multigraph(2, 10), CenterSpec.from_json(10, PACK_2K10["centers"])


def decomp_4k100() -> DecompInstance:
    return DecompInstance(4, 100, IntMultiset.from_json(SIZES_4K100))
