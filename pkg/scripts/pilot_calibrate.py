"""Run the statistical suites at the pilot seeds and freeze their bands.

    python3 scripts/pilot_calibrate.py                 # every suite
    python3 scripts/pilot_calibrate.py --only maxcut   # one suite, merged into the file

Results are merged into tests/fixtures/pilot_bands.json.
"""
from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from pathlib import Path

from rigidcuts.calibration import PILOT_SEEDS, SUITES, WIDEN, band, suite_config, suite_statistics
from rigidcuts.experiments import run_experiment

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "pilot_bands.json"


def calibrate(name: str, threads: int) -> dict:
    runs, seconds = [], []
    for seed in PILOT_SEEDS:
        t0 = time.perf_counter()
        runs.append(run_experiment(suite_config(name, seed), threads))
        seconds.append(time.perf_counter() - t0)
        print(f"  {name} seed {seed}: {seconds[-1]:.1f}s", flush=True)
    entry = {"config": SUITES[name].to_dict(), "seeds": list(PILOT_SEEDS), "seconds": seconds, "widen": WIDEN}
    eps = None
    if name == "balance":
        # eps is the pooled median of the per-trial worst deviations
        pooled = [rec["value"] for s in runs for rec in s.records[0]]
        eps = round(statistics.median(pooled), 4)
        entry["eps"] = eps
    per_seed = [suite_statistics(name, s, eps) for s in runs]
    entry["values"] = per_seed
    entry["bands"] = []
    for col in zip(*per_seed):
        lo, hi, sigma = band(list(col))
        entry["bands"].append({"low": lo, "high": hi, "min": min(col), "max": max(col), "sigma": sigma})
    return entry


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--only", action="append", choices=sorted(SUITES), help="suite to calibrate (repeatable)")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args(argv)
    data = json.loads(args.out.read_text()) if args.out.exists() else {}
    for name in args.only or list(SUITES):
        print(f"calibrating {name}", flush=True)
        data[name] = calibrate(name, args.threads)
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
        print(f"  bands {data[name]['bands']}", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
