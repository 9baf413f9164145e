"""Exhaustive checks of the deterministic cut lemmas on small graphs.

For every base graph G the sweep builds a batch of perturbed graphs G △ T
(every single pair, plus sets of two and three pairs), evaluates all of their
canonical r-cuts at once with :class:`~rigidcuts.naive.CutSpace`, and tests:

- ``non_edges``: e outside G and eq_{d+1}(G) implies e outside eq_d(G + e);
- ``nested``: eq_{d+|T|}(G) is contained in eq_d(G △ T), |T| <= 3;
- ``core_nested``: a (d+|T|)-core of G yields a d-core of G △ T refined by it;
- ``analogous``: the four characterisations of a non-edge leaving eq_0;
- ``unbalanced``: the crossing-pair bound for every cut;
- ``core_lemma``: rigidity plus balanced near-optimal cuts force large components;
- ``witnesses``: degree-condition vertices in a maximum cut are singletons;
- ``cut_bound``: r * b_r(G) >= (r - 1) * |G|.

The packaged operations (``core_refines``, ``non_rigidity_witnesses``,
``unbalance_bound_check``) are cross-checked against the vectorised results
on a sample of each batch.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

import networkx as nx
import numpy as np

from rigidcuts.cuts import enumerate_assignments, unbalance_bound_check
from rigidcuts.equivalence import core_refines, equivalence, non_rigidity_witnesses
from rigidcuts.graph import Graph, RngSeed, pair_from_index, sample_gnm
from rigidcuts.naive import CutSpace

LEMMAS = ("non_edges", "nested", "core_nested", "analogous", "unbalanced", "core_lemma", "witnesses", "cut_bound")
MAX_T = 3
D_RANGE = range(4)


@dataclass
class SweepReport:
    graphs: int = 0
    checks: Counter = field(default_factory=Counter)
    violations: Counter = field(default_factory=Counter)
    examples: dict = field(default_factory=dict)

    def record(self, lemma: str, bad: int, total: int, example=None) -> None:
        self.checks[lemma] += total
        if bad:
            self.violations[lemma] += bad
            self.examples.setdefault(lemma, example)

    def ok(self) -> bool:
        return not any(self.violations.values())

    def merge(self, other: SweepReport) -> None:
        self.graphs += other.graphs
        self.checks.update(other.checks)
        self.violations.update(other.violations)
        for k, v in other.examples.items():
            self.examples.setdefault(k, v)


def atlas_graphs(max_n: int = 6) -> list[Graph]:
    """Every graph on 2..max_n vertices up to isomorphism (max_n <= 7)."""
    out = []
    for g in nx.graph_atlas_g():
        if 2 <= g.number_of_nodes() <= max_n:
            out.append(Graph.from_edges(g.number_of_nodes(), g.edges()))
    return out


def random_graphs(n: int, count: int, seed: int) -> list[Graph]:
    """``count`` graphs G(n, m) with m uniform on [0, C(n, 2)]."""
    rng = RngSeed(seed, n).generator()
    ms = rng.integers(0, comb(n, 2) + 1, size=count)
    return [sample_gnm(n, int(m), RngSeed(seed, (n << 32) | i)) for i, m in enumerate(ms)]


def _perturbations(P: int, rng: np.random.Generator, exhaustive: bool, samples: int) -> list[tuple[int, ...]]:
    sets: list[tuple[int, ...]] = [()]
    sets += [(e,) for e in range(P)]
    for k in range(2, MAX_T + 1):
        if k > P:
            break
        if exhaustive:
            sets += list(combinations(range(P), k))
        else:
            seen = set()
            while len(seen) < min(samples, comb(P, k)):
                seen.add(tuple(sorted(rng.choice(P, size=k, replace=False).tolist())))
            sets += sorted(seen)
    return sets


class _Space:
    """CutSpace plus per-cut part counts and the pair -> (u, v) layout."""

    def __init__(self, n: int, r: int):
        self.cs = CutSpace(n, r)
        self.n, self.r = n, r
        a = self.cs.assign
        self.part_max = np.stack([(a == i).sum(axis=1) for i in range(r)], axis=1).max(axis=1)
        self.iu = np.array([pair_from_index(k) for k in range(self.cs.num_pairs)], dtype=np.int64).reshape(-1, 2)


def _eq_matrix(space: _Space, sep_row: np.ndarray) -> np.ndarray:
    """n x n boolean equivalence matrix (diagonal included) from a separated-pairs row."""
    n = space.n
    eq = np.ones((n, n), dtype=bool)
    u, v = space.iu[:, 0], space.iu[:, 1]
    eq[u, v] = ~sep_row
    eq[v, u] = ~sep_row
    return eq


def _core_members(eq: np.ndarray, n: int, r: int) -> list[int] | None:
    """Component representatives (smallest vertex) of the core, or None.

    Components larger than n/(r+1) number at most r, so the core exists
    exactly when there are r of them.
    """
    sizes = eq.sum(axis=1)
    reps = [v for v in range(n) if not eq[v, :v].any() and sizes[v] * (r + 1) > n]
    return reps if len(reps) == r else None


def check_graph(G: Graph, r: int, space: _Space, rng: np.random.Generator, exhaustive: bool,
                samples: int, report: SweepReport, crosscheck: bool) -> None:
    n, P = G.n, space.cs.num_pairs
    cs = space.cs
    g = G.pair_vector().astype(bool)
    Ts = _perturbations(P, rng, exhaustive, samples)
    V = np.repeat(g[None, :], len(Ts), axis=0)
    for i, T in enumerate(Ts):
        for e in T:
            V[i, e] = ~V[i, e]
    sizes = cs.sizes(V.T)  # cuts x variants
    b = sizes.max(axis=0)
    tsize = np.array([len(T) for T in Ts])
    dmax = max(D_RANGE) + MAX_T
    sep = {d: cs.separated(sizes, b, d) for d in range(dmax + 1)}  # variants x pairs

    report.record("cut_bound", int(np.sum(r * b < (r - 1) * V.sum(axis=1))), len(Ts))

    # four characterisations of a non-edge e leaving eq_0(G); variant 1 + e is G △ e
    maxcuts = sizes[:, 0] == b[0]
    bad = 0
    nonedges = [e for e in range(P) if not g[e]]
    for e in nonedges:
        ve = 1 + e
        a1 = bool(sep[0][0, e])
        a2 = bool(cs.cross[maxcuts, e].any())
        a3 = bool(cs.cross[sizes[:, ve] == b[ve], e].all())
        a4 = bool(b[ve] == b[0] + 1)
        bad += len({a1, a2, a3, a4}) != 1
    report.record("analogous", bad, len(nonedges), (G.edges(), r))

    for d in D_RANGE:
        # non-edges lemma: e not in G, separated at d+1 in G => separated at d in G + e
        bad = sum(1 for e in nonedges if sep[d + 1][0, e] and not sep[d][1 + e, e])
        report.record("non_edges", bad, len(nonedges), (G.edges(), r, d))

        # nested: separated in G △ T at d => separated in G at d + |T|
        bad = 0
        for k in range(1, MAX_T + 1):
            rows = np.flatnonzero(tsize == k)
            if len(rows):
                bad += int(np.sum((sep[d][rows] & ~sep[d + k][0][None, :]).any(axis=1)))
        report.record("nested", bad, len(Ts) - 1, (G.edges(), r, d))

        # core nested
        bad = total = 0
        host_cores = {}
        for k in range(0, MAX_T + 1):
            eqh = _eq_matrix(space, sep[d + k][0])
            host_cores[k] = (eqh, _core_members(eqh, n, r))
        for i, T in enumerate(Ts):
            eqh, hc = host_cores[len(T)]
            if hc is None:
                continue
            total += 1
            eqv = _eq_matrix(space, sep[d][i])
            vc = _core_members(eqv, n, r)
            good = vc is not None
            if good:
                vsizes = eqv.sum(axis=1)
                for rep in hc:
                    members = np.flatnonzero(eqh[rep])
                    inside = eqv[np.ix_(members, members)].all()
                    big = vsizes[rep] * (r + 1) > n
                    good &= bool(inside and big)
            bad += not good
        report.record("core_nested", bad, total, (G.edges(), r, d))

        # lemma on cores, over a grid of alpha below 1/(r^2 + r)
        eq0 = _eq_matrix(space, sep[d][0])
        npairs = int((~sep[d][0]).sum())
        comp_sizes = sorted((int(eq0[v].sum()) for v in range(n) if not eq0[v, :v].any()), reverse=True)
        near = sizes[:, 0] >= b[0] - d
        widest = int(space.part_max[near].max())
        bad = total = 0
        for j in range(1, 6):
            alpha = Fraction(j, 6 * (r * r + r))
            rigid = npairs >= (1 - alpha / r) / r * comb(n, 2)
            balanced = widest <= (1 + alpha) * Fraction(n, r)
            if rigid and balanced:
                total += 1
                top = comp_sizes[:r]
                if len(top) < r or any(s < Fraction(n, r) - alpha * n for s in top):
                    bad += 1
        report.record("core_lemma", bad, total, (G.edges(), r, d))

        # non-rigidity witnesses, for every maximum cut
        A = G.adjacency_matrix().astype(np.int64)
        deg = A.sum(axis=1)
        rows = cs.assign[maxcuts]
        same = rows[:, :, None] == rows[:, None, :]  # cuts x n x n
        own = (same * A[None, :, :]).sum(axis=2)
        wit = r * own >= deg[None, :] - (r - 1) * d
        singleton = eq0.sum(axis=1) == 1
        report.record("witnesses", int(np.sum(wit & ~singleton[None, :])), int(wit.size), (G.edges(), r, d))

        if crosscheck:
            T = Ts[1 + int(rng.integers(0, len(Ts) - 1))] if len(Ts) > 1 else ()
            Tpairs = [pair_from_index(e) for e in T]
            if host_cores[len(T)][1] is not None:
                ok = core_refines(G, Tpairs, r, d)
                report.record("core_nested", int(not ok), 1, (G.edges(), r, d, Tpairs))
            X = non_rigidity_witnesses(G, r, d)
            lexmin = cs.assign[np.flatnonzero(maxcuts)[0]]
            expect = {v for v in range(n) if r * int((A[v] * (lexmin == lexmin[v])).sum()) >= deg[v] - (r - 1) * d}
            report.record("witnesses", int(X != expect), 1, (G.edges(), r, d))


def check_unbalanced(n: int, r: int, report: SweepReport) -> None:
    """The crossing-pair bound for every canonical r-cut of [n]."""
    space = CutSpace(n, r)
    bad = sum(1 for row in space.assign if not unbalance_bound_check(tuple(int(x) for x in row), n, r))
    report.record("unbalanced", bad, len(space.assign), (n, r))


def run_sweep(graphs: list[Graph], rs=(2, 3), seed: int = 0, exhaustive_upto: int = 6, samples: int = 20,
              crosscheck_every: int = 10) -> SweepReport:
    report = SweepReport()
    spaces: dict[tuple[int, int], _Space] = {}
    rng = RngSeed(seed, 7).generator()
    for idx, G in enumerate(graphs):
        report.graphs += 1
        for r in rs:
            key = (G.n, r)
            if key not in spaces:
                spaces[key] = _Space(G.n, r)
                check_unbalanced(G.n, r, report)
            check_graph(G, r, spaces[key], rng, G.n <= exhaustive_upto, samples, report,
                        crosscheck=idx % crosscheck_every == 0)
    return report


def check_core_lemma_planted(count: int, seed: int, report: SweepReport, sides=(8, 9, 10), flips=4) -> None:
    """The core lemma on perturbed balanced complete bipartite graphs, r = 2.

    On at most 8 vertices its rigidity hypothesis cannot hold for any admissible
    alpha, so this supplies instances where the implication is not vacuous.
    """
    rng = RngSeed(seed, 11).generator()
    r = 2
    for t in range(count):
        a = int(sides[t % len(sides)])
        n = 2 * a
        base = Graph.complete_multipartite(a, a).pair_vector().astype(bool)
        for e in rng.choice(comb(n, 2), size=int(rng.integers(0, flips + 1)), replace=False):
            base[e] = ~base[e]
        G = Graph.from_edges(n, [pair_from_index(int(e)) for e in np.flatnonzero(base)])
        for d in range(3):
            _, rows, _ = enumerate_assignments(G, r, d)
            widest = int(max((rows == i).sum(axis=1).max() for i in range(r)))
            S = equivalence(G, r, d)
            comp_sizes = sorted((len(X) for X in S.components), reverse=True)
            bad = total = 0
            for j in range(1, 12):
                alpha = Fraction(j, 12 * (r * r + r))
                rigid = S.num_pairs >= (1 - alpha / r) / r * comb(n, 2)
                balanced = widest <= (1 + alpha) * Fraction(n, r)
                if rigid and balanced:
                    total += 1
                    if len(comp_sizes) < r or any(s < Fraction(n, r) - alpha * n for s in comp_sizes[:r]):
                        bad += 1
            report.record("core_lemma", bad, total, (G.edges(), r, d))
