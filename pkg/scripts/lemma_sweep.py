"""Exhaustive check of the structural cut lemmas over small graphs.

    python3 scripts/lemma_sweep.py                      # atlas n <= 6 plus 500 random graphs at n = 7, 8
    python3 scripts/lemma_sweep.py --random 50 --planted 0

Prints checks and violations per lemma; exits 1 if anything is violated.
"""
from __future__ import annotations

import argparse
import sys
import time

from rigidcuts.sweep import SweepReport, atlas_graphs, check_core_lemma_planted, random_graphs, run_sweep


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-atlas-n", type=int, default=6, help="all graphs up to this order (at most 7)")
    ap.add_argument("--random", type=int, default=500, help="random graphs per order in --random-n")
    ap.add_argument("--random-n", type=int, nargs="*", default=[7, 8])
    ap.add_argument("--planted", type=int, default=200, help="perturbed K_{a,a} instances for the core lemma")
    ap.add_argument("--seed", type=int, default=17)
    args = ap.parse_args(argv)

    t0 = time.perf_counter()
    rep = run_sweep(atlas_graphs(args.max_atlas_n), seed=args.seed)
    for n in args.random_n:
        rep.merge(run_sweep(random_graphs(n, args.random, seed=args.seed), seed=args.seed + n))
    if args.planted:
        planted = SweepReport()
        check_core_lemma_planted(args.planted, args.seed, planted)
        rep.merge(planted)

    print(f"{rep.graphs} graphs in {time.perf_counter() - t0:.1f}s")
    for lemma in sorted(rep.checks):
        print(f"  {lemma:12s} {rep.checks[lemma]:>10d} checks  {rep.violations[lemma]:>4d} violations")
    for lemma, example in rep.examples.items():
        print(f"  first {lemma} violation: {example}")
    return 0 if rep.ok() else 1


if __name__ == "__main__":
    sys.exit(main())
