"""Exact maximum r-cuts, deficit-bounded cut enumeration and edge partitions.

Cuts are stored canonically: vertex 0 is in part 0 and part labels first
appear in increasing vertex order.  Parts may be empty.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

import numpy as np

from rigidcuts import _search
from rigidcuts.errors import DeskScaleError, ParameterError
from rigidcuts.graph import EdgeSet, Graph

MAX_VERTICES = 64
DEFAULT_NODE_LIMIT = 4 * 10**9
DEFAULT_MAX_CUTS = 2 * 10**6


@dataclass(frozen=True)
class Cut:
    r: int
    assign: tuple[int, ...]
    size: int
    deficit: int

    @property
    def parts(self) -> list[frozenset[int]]:
        return [frozenset(v for v, a in enumerate(self.assign) if a == i) for i in range(self.r)]

    def separates(self, u: int, v: int) -> bool:
        return self.assign[u] != self.assign[v]

    def to_record(self) -> dict:
        return {"assign": list(self.assign), "size": self.size, "deficit": self.deficit}


@dataclass(frozen=True)
class CutFamily:
    """All canonical r-cuts of a host graph with deficit at most ``d``."""

    graph_digest: str
    r: int
    d: int
    b: int
    cuts: tuple[Cut, ...]

    def __len__(self) -> int:
        return len(self.cuts)

    def __iter__(self):
        return iter(self.cuts)

    def assignments(self) -> np.ndarray:
        n = len(self.cuts[0].assign) if self.cuts else 0
        return np.array([c.assign for c in self.cuts], dtype=np.int64).reshape(len(self.cuts), n)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(c.to_record(), separators=(",", ":")) + "\n" for c in self.cuts)


def canonicalize(assign: np.ndarray) -> np.ndarray:
    """Relabel each row of an assignment matrix into first-appearance order."""
    assign = np.atleast_2d(np.asarray(assign, dtype=np.int64))
    k, n = assign.shape
    if n == 0:
        return assign.copy()
    labels = int(assign.max()) + 1
    mapping = np.full((k, labels), -1, dtype=np.int64)
    nxt = np.zeros(k, dtype=np.int64)
    out = np.empty_like(assign)
    rows = np.arange(k)
    for v in range(n):
        col = assign[:, v]
        fresh = mapping[rows, col] < 0
        mapping[rows[fresh], col[fresh]] = nxt[fresh]
        nxt[fresh] += 1
        out[:, v] = mapping[rows, col]
    return out


def cut_sizes(G: Graph, assign: np.ndarray) -> np.ndarray:
    assign = np.atleast_2d(assign)
    edges = np.array(G.edges(), dtype=np.int64).reshape(-1, 2)
    if len(edges) == 0:
        return np.zeros(assign.shape[0], dtype=np.int64)
    return (assign[:, edges[:, 0]] != assign[:, edges[:, 1]]).sum(axis=1)


def cut_size(G: Graph, assign: Sequence[int]) -> int:
    return int(cut_sizes(G, np.asarray(assign))[0])


def _check_r(r: int) -> None:
    if r < 2:
        raise ParameterError(f"r={r}: need at least two parts")


# -- solver state ------------------------------------------------------------

@dataclass
class _Prepared:
    n: int
    r: int
    order: np.ndarray  # position -> original vertex
    fptr: np.ndarray
    fidx: np.ndarray
    suffix: np.ndarray  # exact b_r of G[order[j:]] for j >= 1; suffix[0] < 0 until solved

    def run(self, start, threshold, slack, collect, out, sizes, node_limit):
        if self.r == 2:
            return _search.search2(start, self.n, self.fptr, self.fidx, self.suffix, threshold,
                                   slack, collect, out, sizes, node_limit)
        return _search.search(start, self.n, self.r, self.fptr, self.fidx, self.suffix, threshold,
                              slack, collect, out, sizes, node_limit)

    def lower(self, k: int) -> int:
        """Size of greedily extending an optimal cut of the k+1 suffix by vertex k."""
        dk = int(self.fptr[k + 1] - self.fptr[k])
        return int(self.suffix[k + 1]) + dk - dk // self.r

    def solve_top(self, node_limit: int) -> int:
        if self.suffix[0] < 0:
            out = np.zeros((1, self.n), dtype=np.int64)
            sizes = np.zeros(1, dtype=np.int64)
            best, _, _, status = self.run(0, self.lower(0), 0, False, out, sizes, node_limit)
            if status == _search.STATUS_NODE_LIMIT:
                raise DeskScaleError(f"max-cut search exceeded {node_limit} nodes (n={self.n}, r={self.r})")
            self.suffix[0] = best
        return int(self.suffix[0])


def _forward_csr(G: Graph, order: np.ndarray):
    n = G.n
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    fptr = np.zeros(n + 1, dtype=np.int64)
    fidx = []
    for j in range(n):
        nb = sorted(int(pos[u]) for u in G.neighbours(int(order[j])) if pos[u] > j)
        fidx.extend(nb)
        fptr[j + 1] = len(fidx)
    return fptr, np.array(fidx, dtype=np.int64)


def _vertex_order(G: Graph) -> np.ndarray:
    """Reverse smallest-last order: repeatedly strip a minimum-degree vertex
    (lowest index on ties) and list the stripped vertices backwards.

    The dense part of the graph comes first, so the late suffixes of the
    Russian-doll search are sparse and their exact values are tight.
    """
    deg = [G.degree(v) for v in range(G.n)]
    alive = set(range(G.n))
    stripped = []
    while alive:
        v = min(alive, key=lambda u: (deg[u], u))
        alive.remove(v)
        stripped.append(v)
        for u in G.neighbours(v):
            if u in alive:
                deg[u] -= 1
    return np.array(stripped[::-1], dtype=np.int64)


@lru_cache(maxsize=512)
def _prepare(G: Graph, r: int, node_limit: int = DEFAULT_NODE_LIMIT) -> _Prepared:
    """Relabel (see :func:`_vertex_order`) and solve every proper suffix (Russian-doll search).

    The full problem (suffix 0) is left to the caller, since cut enumeration
    proves it as a by-product.
    """
    if G.n > MAX_VERTICES:
        raise DeskScaleError(f"n={G.n} exceeds the exact-search limit of {MAX_VERTICES} vertices")
    n = G.n
    order = _vertex_order(G)
    fptr, fidx = _forward_csr(G, order)
    suffix = np.zeros(n + 1, dtype=np.int64)
    suffix[0] = -1
    prep = _Prepared(n, r, order, fptr, fidx, suffix)
    out = np.zeros((1, n), dtype=np.int64)
    sizes = np.zeros(1, dtype=np.int64)
    spent = 0
    for k in range(n - 1, 0, -1):
        best, _, nodes, status = prep.run(k, prep.lower(k), 0, False, out, sizes, node_limit - spent)
        spent += nodes
        if status == _search.STATUS_NODE_LIMIT:
            raise DeskScaleError(f"max-cut search exceeded {node_limit} nodes (n={n}, r={r})")
        suffix[k] = best
    return prep


def _to_original(prep: _Prepared, rows: np.ndarray) -> np.ndarray:
    out = np.empty_like(rows)
    out[:, prep.order] = rows
    return canonicalize(out)


def max_cut_size(G: Graph, r: int = 2) -> int:
    """Exact maximum r-cut size b_r(G)."""
    _check_r(r)
    if G.n == 0:
        return 0
    return _prepare(G, r, DEFAULT_NODE_LIMIT).solve_top(DEFAULT_NODE_LIMIT)


def max_cut(G: Graph, r: int = 2) -> Cut:
    """The lexicographically least canonical maximum r-cut."""
    fam = enumerate_cuts(G, r, 0)
    return fam.cuts[0]


def enumerate_assignments(G: Graph, r: int, d: int, max_cuts: int = DEFAULT_MAX_CUTS,
                          node_limit: int = DEFAULT_NODE_LIMIT) -> tuple[int, np.ndarray, np.ndarray]:
    """Canonical assignments (rows, lexicographically sorted) with deficit <= d.

    Returns ``(b, assignments, sizes)``.
    """
    _check_r(r)
    if d < 0:
        raise ParameterError("deficit budget must be nonnegative")
    n = G.n
    if n == 0:
        return 0, np.zeros((1, 0), dtype=np.int64), np.zeros(1, dtype=np.int64)
    prep = _prepare(G, r, node_limit)
    known = prep.suffix[0] >= 0
    # without a known optimum, start from a feasible lower bound; the threshold
    # rises to best - d as better leaves appear, which also proves the optimum
    threshold = int(prep.suffix[0]) - d if known else prep.lower(0) - d
    cap = 1024
    while True:
        out = np.zeros((cap, n), dtype=np.int64)
        sizes = np.zeros(cap, dtype=np.int64)
        best, stored, _, status = prep.run(0, threshold, d, True, out, sizes, node_limit)
        if status == _search.STATUS_NODE_LIMIT:
            raise DeskScaleError(f"cut enumeration exceeded {node_limit} nodes")
        if status == _search.STATUS_OK:
            break
        if cap >= max_cuts:
            raise DeskScaleError(f"more than {max_cuts} cuts with deficit <= {d}")
        cap = min(4 * cap, max_cuts)
    if not known:
        prep.suffix[0] = best
    b = int(prep.suffix[0])
    rows = _to_original(prep, out[:stored])
    key = np.lexsort(rows.T[::-1])
    return b, rows[key], sizes[:stored][key]


def enumerate_cuts(G: Graph, r: int = 2, d: int = 0, *, naive: bool = False) -> CutFamily:
    """Every canonical r-cut of ``G`` with deficit at most ``d``.

    ``naive=True`` switches to brute-force enumeration of all r**n assignments
    (the cross-validation oracle, n <= 12).
    """
    if naive:
        from rigidcuts.naive import naive_enumerate
        b, rows, sizes = naive_enumerate(G, r, d)
    else:
        b, rows, sizes = enumerate_assignments(G, r, d)
    cuts = tuple(Cut(r, tuple(int(x) for x in row), int(s), b - int(s)) for row, s in zip(rows, sizes))
    return CutFamily(G.digest(), r, d, b, cuts)


def critical_edges(G: Graph, r: int = 2) -> EdgeSet:
    """Edges of ``G`` crossing every maximum r-cut."""
    _, rows, _ = enumerate_assignments(G, r, 0)
    return frozenset((u, v) for u, v in G.edges() if np.all(rows[:, u] != rows[:, v]))


def edge_partition(C: Iterable[Iterable[int]], n: int) -> tuple[EdgeSet, EdgeSet, EdgeSet]:
    """``(int, ext, ext*)`` for a family of pairwise disjoint vertex sets."""
    sets = [frozenset(X) for X in C]
    seen: set[int] = set()
    for X in sets:
        if any(v < 0 or v >= n for v in X):
            raise ParameterError("vertex sets must lie within [0, n)")
        if seen & X:
            raise ParameterError("vertex sets overlap")
        seen |= X
    label = {v: i for i, X in enumerate(sets) for v in X}
    internal, external = set(), set()
    for u, v in combinations(sorted(seen), 2):
        (internal if label[u] == label[v] else external).add((u, v))
    every = {(u, v) for u, v in combinations(range(n), 2)}
    return frozenset(internal), frozenset(external), frozenset(every - internal)


def unbalance_bound_check(cut: Cut | Sequence[int], n: int, r: int | None = None) -> bool:
    """|ext(cut)| <= (1 - 1/r - r*eps^2/(r-1)) * C(n,2) + n/2 with eps = max_i|A_i|/n - 1/r."""
    if isinstance(cut, Cut):
        assign, r = cut.assign, cut.r
    else:
        assign = tuple(cut)
        if r is None:
            raise ParameterError("r is required for a raw assignment")
    if len(assign) != n:
        raise ParameterError("assignment length must equal n")
    counts = [0] * r
    for a in assign:
        counts[a] += 1
    ext = comb(n, 2) - sum(comb(c, 2) for c in counts)
    eps = Fraction(max(counts), n) - Fraction(1, r)
    rhs = (1 - Fraction(1, r) - r * eps * eps / (r - 1)) * comb(n, 2) + Fraction(n, 2)
    return ext <= rhs
