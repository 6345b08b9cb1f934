#!/usr/bin/env python3
"""Sweep seeded random instances and compare the product-based checks plus
the closed-loop language against the brute-force string oracle.

Usage: python scripts/agreement_sweep.py --instances 200 --bound 8 [--jobs 4]
"""

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from netsup.cli import _agreement_for_seed
from netsup.randgen import random_instance


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--instances", type=int, default=200)
    parser.add_argument("--bound", type=int, default=8)
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()

    payloads = [(args.seed + k, args.bound) for k in range(args.instances)]
    start = time.monotonic()
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_agreement_for_seed, payloads))
    else:
        results = [_agreement_for_seed(p) for p in payloads]
    elapsed = time.monotonic() - start

    failures = [r for r in results if r["disagreements"]]
    sizes = sorted(r["comm_states"] for r in results)
    print(f"instances: {len(results)}  bound: {args.bound}  time: {elapsed:.1f}s")
    print(f"state-space sizes: min={sizes[0]} median={sizes[len(sizes) // 2]} max={sizes[-1]}")
    print(f"disagreements: {len(failures)}")
    for r in failures:
        inst = random_instance(r["seed"])
        print(f"  seed {r['seed']}: {r['disagreements']}  "
              f"(plant {len(inst.plant.states)} states)")
    return 0 if not failures else 1


if __name__ == "__main__":
    sys.exit(main())
