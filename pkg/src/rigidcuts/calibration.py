"""Committed configurations and band arithmetic for the statistical suites.

A band is fixed by running a suite at several disjoint master seeds and
widening the observed [min, max] by three standard deviations of the
per-seed statistic.  The frozen bands live in ``tests/fixtures``; the
acceptance run then uses a seed outside the calibration set.
"""
from __future__ import annotations

import json
import math
import statistics
from dataclasses import replace
from pathlib import Path

import numpy as np

from rigidcuts.experiments import ExperimentConfig, ExperimentSummary

PILOT_SEEDS = (101, 102, 103, 104, 105)
ACCEPTANCE_SEED = 2026
WIDEN = 3.0

SUITES: dict[str, ExperimentConfig] = {
    "rigidity": ExperimentConfig(kind="rigidity", n=(40,), m=(100, 200, 400), r=2, d=0, eps=0.2, trials=300),
    "xr": ExperimentConfig(kind="xr", n=(24, 48), p=(0.5,), r=2, trials=300),
    "maxcut": ExperimentConfig(kind="maxcut", n=(20, 24, 28), m=(95, 138, 189), grid="zip", r=2, trials=300),
    "balance": ExperimentConfig(kind="balance", n=(18,), p=(0.6,), r=2, k=1, trials=300),
}


def suite_config(name: str, seed: int, **changes) -> ExperimentConfig:
    return replace(SUITES[name], seed=seed, **changes)


def suite_statistics(name: str, summary: ExperimentSummary, eps: float | None = None) -> list[float]:
    """The calibrated quantities of one run, one entry per tracked statistic."""
    pts = summary.points
    if name == "rigidity":
        return [pt["frequency"] for pt in pts]
    if name == "xr":
        return [pts[1]["mean"] / pts[0]["mean"]]
    if name == "maxcut":
        return [pt["mean"] for pt in pts]
    if name == "balance":
        vals = np.array([rec["value"] for rec in summary.records[0]])
        if eps is None:
            raise ValueError("balance statistics need eps")
        return [float(np.mean(vals <= eps))]
    raise KeyError(name)


def band(values: list[float], widen: float = WIDEN) -> tuple[float, float, float]:
    """(low, high, sigma) with sigma the sample standard deviation of ``values``."""
    sigma = statistics.stdev(values) if len(values) > 1 else 0.0
    return min(values) - widen * sigma, max(values) + widen * sigma, sigma


def trend_ok(freqs: list[float], trials: int, k: float = 2.0) -> list[bool]:
    """Each frequency exceeds its predecessor by at most k binomial standard errors."""
    out = []
    for a, b in zip(freqs, freqs[1:]):
        sd = math.sqrt(a * (1 - a) / trials + b * (1 - b) / trials)
        out.append(b <= a + k * sd)
    return out


def load_bands(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())
