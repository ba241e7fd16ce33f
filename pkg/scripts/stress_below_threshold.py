#!/usr/bin/env python3
"""Decompose random below-threshold instances and report timings and failures."""

import argparse
import random
import time

from stardec.decompose import decompose, verify
from stardec.sampling import random_below_threshold


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--lambdas", default="2,3,4,5,6,7")
    p.add_argument("--count", type=int, default=50, help="instances per lambda")
    p.add_argument("--n-min", type=int, default=10)
    p.add_argument("--n-max", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    rng = random.Random(args.seed)
    for lam in (int(x) for x in args.lambdas.split(",")):
        failures, worst, t0 = 0, 0.0, time.perf_counter()
        for _ in range(args.count):
            inst = random_below_threshold(rng, lam, rng.randint(args.n_min, args.n_max))
            t = time.perf_counter()
            try:
                ok = verify(inst, decompose(inst))
            except Exception as exc:  # report, keep going
                print(f"  lambda={lam} n={inst.n}: {type(exc).__name__}: {exc}")
                ok = False
            worst = max(worst, time.perf_counter() - t)
            failures += not ok
        print(f"lambda={lam}: {args.count - failures}/{args.count} ok, "
              f"total {time.perf_counter() - t0:.1f}s, slowest {worst:.2f}s")


if __name__ == "__main__":
    main()
