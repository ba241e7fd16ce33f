#!/usr/bin/env python3
"""Generate hardness instances for a few lambdas and check the if-direction on each."""

import argparse
import time

from stardec.decompose import verify
from stardec.hardness import (
    SearchMiss,
    ThreePartitionInstance,
    even_if_assignment,
    gen_hard_even,
    gen_hard_odd,
    odd_if_assignment,
    solve_three_partition,
)
from stardec.multigraph import StarPacking, complete_multigraph
from stardec.packing import pack_with_centers


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--partition", default="2,2,3")
    p.add_argument("--lambdas", default="2,3,4,5")
    p.add_argument("--search-limit", type=int, default=5000)
    args = p.parse_args()
    tp = ThreePartitionInstance.parse(args.partition)
    triples = solve_three_partition(tp)
    for lam in (int(x) for x in args.lambdas.split(",")):
        t0 = time.perf_counter()
        if lam % 2:
            params, inst = gen_hard_odd(lam, tp)
            build = odd_if_assignment
        else:
            res = gen_hard_even(lam, tp, args.search_limit)
            if isinstance(res, SearchMiss):
                print(f"lambda={lam}: no parameters up to n={res.limit} (tightest: {res.constraint})")
                continue
            params, inst = res
            build = even_if_assignment
        line = f"lambda={lam}: n={params.n} m={params.m} stars={len(inst.sizes)}"
        if triples is not None:
            out = pack_with_centers(complete_multigraph(lam, params.n), build(params, tp, triples))
            line += f" if-direction={'ok' if isinstance(out, StarPacking) and verify(inst, out) else 'FAILED'}"
        print(f"{line} ({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
