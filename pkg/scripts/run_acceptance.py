#!/usr/bin/env python3
"""Run the acceptance criteria and print one pass/fail line each.

    python3 scripts/run_acceptance.py            # all criteria
    python3 scripts/run_acceptance.py --only 2,3 # a subset
"""

import argparse
import sys

from stardec.acceptance import run_all


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_all(seed=args.seed, only=only)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
