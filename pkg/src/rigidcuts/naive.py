"""Brute-force r**n enumeration: the oracle the branch-and-bound is checked against.

:class:`CutSpace` holds every canonical r-cut of an n-vertex vertex set together
with its pair-crossing matrix, which makes cut sizes of many graphs at once a
single matrix product.  The exhaustive lemma sweeps run on top of it.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from rigidcuts.cuts import canonicalize
from rigidcuts.errors import DeskScaleError, ParameterError
from rigidcuts.graph import Graph, pair_index

NAIVE_STATE_LIMIT = 10**7


def colex_pairs(n: int) -> np.ndarray:
    """``(C(n,2), 2)`` array of pairs in colex (pair-index) order."""
    pairs = sorted(combinations(range(n), 2), key=lambda e: pair_index(*e))
    return np.array(pairs, dtype=np.int64).reshape(-1, 2)


@lru_cache(maxsize=64)
def all_canonical_cuts(n: int, r: int) -> np.ndarray:
    """Every r-cut of [n] once, from the full r**n product, canonicalized and deduplicated."""
    if r < 2:
        raise ParameterError("r must be at least 2")
    if r**n > NAIVE_STATE_LIMIT:
        raise DeskScaleError(f"naive enumeration of {r}**{n} assignments exceeds {NAIVE_STATE_LIMIT}")
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    raw = np.array(list(product(range(r), repeat=n)), dtype=np.int64)
    canon = np.unique(canonicalize(raw), axis=0)
    canon.setflags(write=False)
    return canon


class CutSpace:
    """All canonical r-cuts of [n] with their crossing matrix over colex pairs."""

    def __init__(self, n: int, r: int):
        self.n, self.r = n, r
        self.assign = all_canonical_cuts(n, r)
        self.pairs = colex_pairs(n)
        if len(self.pairs):
            self.cross = (self.assign[:, self.pairs[:, 0]] != self.assign[:, self.pairs[:, 1]])
        else:
            self.cross = np.zeros((len(self.assign), 0), dtype=bool)
        self.cross_f = self.cross.astype(np.float32)

    @property
    def num_pairs(self) -> int:
        return len(self.pairs)

    def sizes(self, graph_vectors: np.ndarray) -> np.ndarray:
        """Cut sizes, shape (cuts, graphs), for 0/1 pair-indicator columns."""
        g = np.asarray(graph_vectors, dtype=np.float32)
        if g.ndim == 1:
            g = g[:, None]
        return np.rint(self.cross_f @ g).astype(np.int64)

    def separated(self, sizes: np.ndarray, b: np.ndarray, d: int) -> np.ndarray:
        """Boolean (graphs, pairs): pair crosses some cut with deficit <= d."""
        ok = (sizes >= (b - d)[None, :]).astype(np.float32)
        return (ok.T @ self.cross_f) > 0.5


def naive_enumerate(G: Graph, r: int, d: int) -> tuple[int, np.ndarray, np.ndarray]:
    """Canonical cuts with deficit <= d by exhaustive enumeration."""
    if d < 0:
        raise ParameterError("deficit budget must be nonnegative")
    space = all_canonical_cuts(G.n, r)
    edges = np.array(G.edges(), dtype=np.int64).reshape(-1, 2)
    sizes = (space[:, edges[:, 0]] != space[:, edges[:, 1]]).sum(axis=1) if len(edges) else np.zeros(len(space), dtype=np.int64)
    b = int(sizes.max())
    keep = sizes >= b - d
    return b, space[keep], sizes[keep]


def naive_max_cut_size(G: Graph, r: int) -> int:
    return naive_enumerate(G, r, 0)[0]


def naive_separated_pairs(G: Graph, r: int, d: int) -> set[tuple[int, int]]:
    """Pairs split by at least one cut with deficit <= d, by unioning crossing masks."""
    _, rows, _ = naive_enumerate(G, r, d)
    sep = np.zeros((G.n, G.n), dtype=bool)
    for row in rows:
        sep |= row[:, None] != row[None, :]
    return {(u, v) for u, v in combinations(range(G.n), 2) if sep[u, v]}


def naive_equivalent_pairs(G: Graph, r: int, d: int) -> set[tuple[int, int]]:
    sep = naive_separated_pairs(G, r, d)
    return {e for e in combinations(range(G.n), 2) if e not in sep}


def components_from_pairs(n: int, pairs) -> list[frozenset[int]]:
    """Connected components of the graph on [n] with the given pairs (union-find via scipy)."""
    pairs = list(pairs)
    if pairs:
        u, v = np.array(pairs).T
        mat = coo_matrix((np.ones(len(pairs)), (u, v)), shape=(n, n))
    else:
        mat = coo_matrix((n, n))
    _, labels = connected_components(mat, directed=False)
    groups: dict[int, set[int]] = {}
    for v, lab in enumerate(labels):
        groups.setdefault(int(lab), set()).add(v)
    return [frozenset(g) for g in groups.values()]


def naive_critical_edges(G: Graph, r: int) -> set[tuple[int, int]]:
    _, rows, _ = naive_enumerate(G, r, 0)
    return {(u, v) for u, v in G.edges() if all(row[u] != row[v] for row in rows)}
