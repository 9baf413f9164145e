"""Seeded Monte Carlo experiments on G(n, m) and G(n, p).

Each experiment runs ``trials`` independent graphs at every grid point.  Trial
``t`` at grid point ``g`` draws from stream ``g << 32 | t`` of the master seed,
so results do not depend on thread count or execution order, and aggregation
always runs in (grid point, trial) order.

Config files are ``key = value`` lines (``#`` starts a comment); list values
are comma separated.  Keys are the fields of :class:`ExperimentConfig`, e.g.::

    kind = xr
    n = 24, 48
    p = 0.5
    trials = 300
    seed = 7
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from itertools import combinations, product
from math import comb
from typing import Callable

import numpy as np
from scipy import stats

from rigidcuts.cuts import enumerate_assignments, max_cut_size
from rigidcuts.equivalence import components_from_assignments, core_meets_alpha, structure_from_components
from rigidcuts.errors import ParameterError
from rigidcuts.extremal import is_h_simonovits
from rigidcuts.graph import Graph, RngSeed, sample_gnm, sample_gnp
from rigidcuts.patterns import builtin

KINDS = ("rigidity", "core", "xr", "maxcut", "balance", "simonovits", "boundary")


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    n: tuple[int, ...]
    m: tuple[int, ...] | None = None
    p: tuple[float, ...] | None = None
    grid: str = "product"  # or "zip": pair the n and density lists entrywise
    r: int = 2
    d: int = 0
    alpha: float = 0.1
    eps: float = 0.2
    k: int = 1
    trials: int = 100
    seed: int = 0
    C: float = 1.0  # constant plugged into the theorem bounds that are reported
    pattern: str = "K3"
    samples: int = 2000  # random sets A per trial when n is above exhaustive_n
    exhaustive_n: int = 16
    keep_records: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown experiment kind {self.kind!r}; choose from {KINDS}")
        if not self.n:
            raise ParameterError("n grid must be nonempty")
        if (self.m is None) == (self.p is None):
            raise ParameterError("give exactly one of m and p")
        dens = self.m if self.m is not None else self.p
        if not dens:
            raise ParameterError("density grid must be nonempty")
        if self.grid not in ("product", "zip"):
            raise ParameterError("grid must be 'product' or 'zip'")
        if self.grid == "zip" and len(dens) != len(self.n):
            raise ParameterError("zip grid needs equally long n and density lists")
        if self.trials < 1:
            raise ParameterError("trials must be at least 1")
        if self.r < 2:
            raise ParameterError("r must be at least 2")
        if self.p is not None and any(not 0 <= q <= 1 for q in self.p):
            raise ParameterError("p values must lie in [0, 1]")

    def points(self) -> list[tuple[int, float]]:
        dens = self.m if self.m is not None else self.p
        if self.grid == "zip":
            return list(zip(self.n, dens))
        return list(product(self.n, dens))

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in ("n", "m", "p"):
            if out[key] is not None:
                out[key] = list(out[key])
        return out


_LIST_KEYS = {"n": int, "m": int, "p": float}


def _parse_value(key: str, raw: str, kinds: dict):
    raw = raw.strip()
    if key in _LIST_KEYS:
        return tuple(_LIST_KEYS[key](x) for x in raw.split(",") if x.strip())
    typ = kinds[key]
    if typ == "bool":
        if raw.lower() not in ("true", "false", "1", "0", "yes", "no"):
            raise ParameterError(f"{key}: expected a boolean, got {raw!r}")
        return raw.lower() in ("true", "1", "yes")
    if typ == "int":
        return int(raw)
    if typ == "float":
        return float(raw)
    return raw


def config_from_mapping(values: dict[str, str]) -> ExperimentConfig:
    kinds = {f.name: str(f.type).split(" ")[0] for f in fields(ExperimentConfig)}
    parsed = {}
    for key, raw in values.items():
        if key not in kinds:
            raise ParameterError(f"unknown config key {key!r}")
        try:
            parsed[key] = _parse_value(key, raw, kinds)
        except ValueError:
            raise ParameterError(f"bad value for {key}: {raw!r}") from None
    if "kind" not in parsed or "n" not in parsed:
        raise ParameterError("config needs at least kind and n")
    return ExperimentConfig(**parsed)


def parse_config(text: str) -> ExperimentConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"config line {lineno}: expected key = value")
        key, raw = line.split("=", 1)
        values[key.strip()] = raw
    return config_from_mapping(values)


# -- statistics ------------------------------------------------------------------

def wilson_interval(successes: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    ci = stats.binomtest(successes, trials).proportion_ci(confidence_level=level, method="wilson")
    return float(ci.low), float(ci.high)


def t_interval(values, level: float = 0.95) -> tuple[float, float]:
    x = np.asarray(values, dtype=float)
    mean = float(x.mean())
    if len(x) < 2 or float(x.std(ddof=1)) == 0.0:
        return mean, mean
    lo, hi = stats.t.interval(level, len(x) - 1, loc=mean, scale=stats.sem(x))
    return float(lo), float(hi)


def aggregate(records: list[dict]) -> dict:
    """Mean, variance and interval of ``value``; frequency and Wilson interval of ``event``."""
    vals = np.array([rec["value"] for rec in records], dtype=float)
    out = {
        "trials": len(records),
        "mean": float(vals.mean()),
        "var": float(vals.var(ddof=1)) if len(vals) > 1 else 0.0,
    }
    out["std"] = math.sqrt(out["var"])
    out["ci_low"], out["ci_high"] = t_interval(vals)
    if "event" in records[0]:
        hits = sum(1 for rec in records if rec["event"])
        out["frequency"] = hits / len(records)
        out["freq_ci_low"], out["freq_ci_high"] = wilson_interval(hits, len(records))
    return out


@dataclass(frozen=True)
class ExperimentSummary:
    config: ExperimentConfig
    points: tuple[dict, ...]
    records: tuple[tuple[dict, ...], ...] | None = field(default=None, compare=True)

    def to_dict(self) -> dict:
        return {"config": self.config.to_dict(), "points": list(self.points)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        keys: list[str] = []
        for pt in self.points:
            for k, v in pt.items():
                if k not in keys and not isinstance(v, (list, dict)):
                    keys.append(k)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for pt in self.points:
            writer.writerow({k: pt.get(k) for k in keys})
        return buf.getvalue()

    def records_jsonl(self) -> str:
        if self.records is None:
            return ""
        lines = []
        for g, recs in enumerate(self.records):
            for rec in recs:
                lines.append(json.dumps({"point": g, **rec}, separators=(",", ":"), allow_nan=False))
        return "".join(line + "\n" for line in lines)


# -- per-trial measurements ----------------------------------------------------

def _sample(cfg: ExperimentConfig, n: int, dens, seed: RngSeed) -> Graph:
    if cfg.m is not None:
        return sample_gnm(n, int(dens), seed)
    return sample_gnp(n, float(dens), seed)


def _structure(G: Graph, r: int, d: int):
    _, rows, _ = enumerate_assignments(G, r, d)
    return rows, structure_from_components(components_from_assignments(rows, G.n), G.n, r, d)


def _trial_rigidity(cfg, G):
    _, S = _structure(G, cfg.r, cfg.d)
    pairs = S.num_pairs
    rigid = pairs * cfg.r >= (1 - cfg.eps) * comb(G.n, 2)
    return {"m": G.m, "eq_pairs": pairs, "value": pairs / max(1, comb(G.n, 2)), "event": not rigid}


def _trial_core(cfg, G):
    _, S = _structure(G, cfg.r, cfg.d)
    largest = max((len(X) for X in S.components), default=0)
    return {
        "m": G.m,
        "has_core": S.core is not None,
        "min_core": min(len(X) for X in S.core) if S.core else 0,
        "largest_component": largest,
        "fixed_set": largest >= cfg.alpha * G.n,
        "value": S.x_r,
        "event": core_meets_alpha(S, cfg.alpha),
    }


def _trial_xr(cfg, G):
    _, S = _structure(G, cfg.r, 0)
    return {"m": G.m, "value": S.x_r}


def _trial_maxcut(cfg, G):
    b = max_cut_size(G, cfg.r)
    excess = b - (cfg.r - 1) * G.m / cfg.r
    norm = excess / math.sqrt(G.m * G.n) if G.m else 0.0
    return {"m": G.m, "b": b, "value": norm}


def worst_balance_deviation(G: Graph, r: int, k: int, p: float) -> float:
    """max over max cuts, k-sets W and parts i of | |N(W; V_i)| - |N(W)|/r | / (n p^k)."""
    if k > G.n or k < 1:
        raise ParameterError(f"k={k} must lie in [1, n]")
    if p <= 0:
        raise ParameterError("p must be positive")
    _, rows, _ = enumerate_assignments(G, r, 0)
    onehot = np.stack([(rows == i) for i in range(r)], axis=2).astype(np.int64)  # cuts x n x r
    nbhds = []
    for W in combinations(range(G.n), k):
        mask = (1 << G.n) - 1
        for v in W:
            mask &= G.adj[v]
        for v in W:
            mask &= ~(1 << v)
        nbhds.append([(mask >> u) & 1 for u in range(G.n)])
    N = np.array(nbhds, dtype=np.int64)  # sets x n
    sizes = N.sum(axis=1)
    counts = np.einsum("sn,cnr->csr", N, onehot)
    dev = np.abs(counts - sizes[None, :, None] / r).max()
    return float(dev / (G.n * p**k))


def _trial_balance(cfg, G, p):
    worst = worst_balance_deviation(G, cfg.r, cfg.k, p)
    return {"m": G.m, "value": worst, "event": worst <= cfg.eps}


def _trial_simonovits(cfg, G):
    ok = is_h_simonovits(G, builtin(cfg.pattern))
    return {"m": G.m, "value": int(ok), "event": ok}


def boundary_required_constant(G: Graph, sets=None) -> float:
    """Smallest C >= 0 with |d(A)| <= (m/N)|A|n + C sqrt(m/n) |A| log(en/|A|) for the given A.

    ``sets`` is a boolean matrix (sets x n); by default every nonempty subset.
    """
    n, m = G.n, G.m
    if m == 0:
        return 0.0
    if sets is None:
        codes = np.arange(1, 1 << n, dtype=np.int64)
        sets = ((codes[:, None] >> np.arange(n)) & 1).astype(bool)
    sets = np.asarray(sets, dtype=bool)
    deg = np.array([G.degree(v) for v in range(n)], dtype=np.int64)
    edges = np.array(G.edges(), dtype=np.int64)
    inside = (sets[:, edges[:, 0]] & sets[:, edges[:, 1]]).sum(axis=1)
    size = sets.sum(axis=1)
    boundary = sets.astype(np.int64) @ deg - inside
    N = comb(n, 2)
    slack = boundary - (m / N) * size * n
    denom = math.sqrt(m / n) * size * np.log(math.e * n / size)
    return float(max(0.0, (slack / denom).max()))


def _boundary_sets(G: Graph, cfg, rng: np.random.Generator) -> np.ndarray | None:
    if G.n <= cfg.exhaustive_n:
        return None
    order = np.argsort([-G.degree(v) for v in range(G.n)], kind="stable")
    prefixes = np.zeros((G.n, G.n), dtype=bool)
    for i in range(G.n):
        prefixes[i, order[: i + 1]] = True
    sizes = rng.integers(1, G.n + 1, size=cfg.samples)
    rand = np.zeros((cfg.samples, G.n), dtype=bool)
    for j, s in enumerate(sizes):
        rand[j, rng.choice(G.n, size=int(s), replace=False)] = True
    return np.vstack([prefixes, rand])


def _trial_boundary(cfg, G, rng):
    return {"m": G.m, "value": boundary_required_constant(G, _boundary_sets(G, cfg, rng))}


# -- runners ---------------------------------------------------------------------

def _trial(cfg: ExperimentConfig, g: int, n: int, dens, t: int) -> dict:
    seed = RngSeed(cfg.seed, (g << 32) | t)
    G = _sample(cfg, n, dens, seed)
    kind = cfg.kind
    if kind == "rigidity":
        rec = _trial_rigidity(cfg, G)
    elif kind == "core":
        rec = _trial_core(cfg, G)
    elif kind == "xr":
        rec = _trial_xr(cfg, G)
    elif kind == "maxcut":
        rec = _trial_maxcut(cfg, G)
    elif kind == "balance":
        p = float(dens) if cfg.p is not None else G.m / comb(n, 2)
        rec = _trial_balance(cfg, G, p)
    elif kind == "simonovits":
        rec = _trial_simonovits(cfg, G)
    else:
        # a separate stream for the random test sets keeps the graph sample unchanged
        rng = RngSeed(cfg.seed, (g << 32) | t | (1 << 62)).generator()
        rec = _trial_boundary(cfg, G, rng)
    return {"trial": t, **rec}


def _point_extras(cfg: ExperimentConfig, n: int, dens, agg: dict) -> dict:
    N = comb(n, 2)
    mbar = float(dens) if cfg.m is not None else float(dens) * N
    out = {}
    if cfg.kind in ("rigidity", "core"):
        delta = 1 - mbar / N if N else 0.0
        if mbar >= 1 and delta > 0:
            body = ((cfg.d + 1) / delta + cfg.r) * math.sqrt(n / mbar) + (n / mbar) ** 0.25
            pref = cfg.C * cfg.r / cfg.eps if cfg.kind == "rigidity" else cfg.C * cfg.r**2 / cfg.alpha
            out["bound"] = pref * body
        else:
            out["bound"] = None
    if cfg.kind == "xr":
        p = float(dens) if cfg.p is not None else mbar / N
        out["scaled_mean"] = agg["mean"] / math.sqrt(n / p) if p > 0 else None
    if cfg.kind == "simonovits":
        P = builtin(cfg.pattern)
        out["reference_p"] = P.theta * n ** (-1 / float(P.m2)) * math.log(n) ** (1 / (P.e - 1))
    return out


def run_experiment(cfg: ExperimentConfig, threads: int = 1) -> ExperimentSummary:
    """Run every trial at every grid point and aggregate in index order."""
    if threads < 1:
        raise ParameterError("threads must be at least 1")
    points = cfg.points()
    if cfg.kind == "balance":
        for n, _ in points:
            if cfg.k > n:
                raise ParameterError(f"k={cfg.k} exceeds n={n}")
    tasks = [(g, n, dens, t) for g, (n, dens) in enumerate(points) for t in range(cfg.trials)]
    run: Callable = lambda task: _trial(cfg, *task)
    if threads == 1:
        results = list(map(run, tasks))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, tasks))
    grouped = [results[g * cfg.trials:(g + 1) * cfg.trials] for g in range(len(points))]
    summaries = []
    for (n, dens), recs in zip(points, grouped):
        agg = aggregate(recs)
        key = "m" if cfg.m is not None else "p"
        summaries.append({"n": n, key: dens, **agg, **_point_extras(cfg, n, dens, agg)})
    if cfg.kind == "xr":
        for prev, cur in zip(summaries, summaries[1:]):
            cur["ratio_to_previous"] = cur["mean"] / prev["mean"] if prev["mean"] else None
    records = tuple(tuple(r) for r in grouped) if cfg.keep_records else None
    return ExperimentSummary(cfg, tuple(summaries), records)


def recompute_points(summary: ExperimentSummary) -> list[dict]:
    """Aggregates rebuilt from the retained per-trial records."""
    if summary.records is None:
        raise ParameterError("summary has no retained records")
    return [aggregate(list(recs)) for recs in summary.records]


# named entry points, one per experiment kind

def _kind(kind: str):
    def runner(cfg: ExperimentConfig, threads: int = 1) -> ExperimentSummary:
        if cfg.kind != kind:
            cfg = replace(cfg, kind=kind)
        return run_experiment(cfg, threads)
    runner.__name__ = f"{kind}_experiment"
    return runner


rigidity_frequency = _kind("rigidity")
core_frequency = _kind("core")
xr_scaling = _kind("xr")
maxcut_second_order = _kind("maxcut")
neighbourhood_balance = _kind("balance")
boundary_bound_check = _kind("boundary")


def simonovits_probe(cfg: ExperimentConfig, H: str | None = None, threads: int = 1) -> ExperimentSummary:
    cfg = replace(cfg, kind="simonovits", pattern=H or cfg.pattern)
    builtin(cfg.pattern)  # validate early
    return run_experiment(cfg, threads)
