"""Simple undirected graphs on vertex set {0, ..., n-1} with bitset adjacency.

Vertex pairs are indexed in colex order, ``pair_index(u, v) = v*(v-1)//2 + u``
for ``u < v``.  This order does not depend on ``n`` and matches the bit order
of the graph6 format, so an edge set is also a Python int bitmask.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable

import numpy as np

from rigidcuts.errors import ParameterError

Pair = tuple[int, int]
EdgeSet = frozenset[Pair]


def pair_index(u: int, v: int) -> int:
    if u > v:
        u, v = v, u
    return v * (v - 1) // 2 + u


def pair_from_index(k: int) -> Pair:
    # largest v with v*(v-1)/2 <= k
    v = int((1 + (1 + 8 * k) ** 0.5) // 2)
    while v * (v - 1) // 2 > k:
        v -= 1
    while (v + 1) * v // 2 <= k:
        v += 1
    return k - v * (v - 1) // 2, v


def normalize_pair(u: int, v: int) -> Pair:
    return (u, v) if u < v else (v, u)


def edge_set(pairs: Iterable[Iterable[int]], n: int | None = None) -> EdgeSet:
    """Validate and normalize an iterable of vertex pairs."""
    out = set()
    for p in pairs:
        u, v = p
        u, v = int(u), int(v)
        if u == v:
            raise ParameterError(f"pair ({u}, {v}) has equal endpoints")
        if min(u, v) < 0 or (n is not None and max(u, v) >= n):
            raise ParameterError(f"pair ({u}, {v}) outside vertex range [0, {n})")
        out.add(normalize_pair(u, v))
    return frozenset(out)


def all_pairs(n: int) -> EdgeSet:
    return frozenset(combinations(range(n), 2))


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph; ``adj[v]`` is the neighbour bitset of ``v``."""

    n: int
    adj: tuple[int, ...]
    m: int = field(init=False, compare=False)

    def __post_init__(self):
        if self.n < 0 or len(self.adj) != self.n:
            raise ParameterError("adjacency length must equal n")
        full = (1 << self.n) - 1
        total = 0
        for v, row in enumerate(self.adj):
            if row & ~full or row >> v & 1:
                raise ParameterError(f"vertex {v}: neighbour outside range or self-loop")
            for u in _bits(row):
                if not self.adj[u] >> v & 1:
                    raise ParameterError(f"asymmetric adjacency between {u} and {v}")
            total += row.bit_count()
        object.__setattr__(self, "m", total // 2)

    # -- construction ---------------------------------------------------
    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> Graph:
        adj = [0] * n
        for u, v in edge_set(edges, n):
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def from_edge_mask(cls, n: int, mask: int) -> Graph:
        return cls.from_edges(n, (pair_from_index(k) for k in _bits(mask)))

    @classmethod
    def from_adjacency_matrix(cls, a) -> Graph:
        a = np.asarray(a)
        n = a.shape[0]
        rows = []
        for v in range(n):
            row = 0
            for u in np.flatnonzero(a[v]):
                row |= 1 << int(u)
            rows.append(row)
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> Graph:
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << v) for v in range(n)))

    @classmethod
    def cycle(cls, n: int) -> Graph:
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls.from_edges(n, ((i, i + 1) for i in range(n - 1)))

    @classmethod
    def complete_multipartite(cls, *sizes: int) -> Graph:
        parts, start = [], 0
        for s in sizes:
            parts.append(range(start, start + s))
            start += s
        edges = [(u, v) for a, b in combinations(parts, 2) for u in a for v in b]
        return cls.from_edges(start, edges)

    # -- queries ----------------------------------------------------------
    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def neighbours(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def edges(self) -> list[Pair]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in _bits(self.adj[u] >> (u + 1) << (u + 1))]

    @cached_property
    def edge_set(self) -> EdgeSet:
        return frozenset(self.edges())

    @cached_property
    def edge_mask(self) -> int:
        mask = 0
        for u, v in self.edges():
            mask |= 1 << pair_index(u, v)
        return mask

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1
        return a

    def pair_vector(self) -> np.ndarray:
        """0/1 indicator over the ``C(n, 2)`` pairs in colex order."""
        vec = np.zeros(comb(self.n, 2), dtype=np.int64)
        for u, v in self.edges():
            vec[pair_index(u, v)] = 1
        return vec

    def digest(self) -> str:
        return hashlib.sha256(f"{self.n}:{self.edge_mask:x}".encode()).hexdigest()[:16]

    def union(self, pairs: Iterable[Iterable[int]]) -> Graph:
        return Graph.from_edges(self.n, self.edge_set | edge_set(pairs, self.n))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


def vertex_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def common_neighbourhood(G: Graph, W: Iterable[int], S: Iterable[int] | None = None) -> frozenset[int]:
    """Vertices of ``S`` adjacent to every vertex of ``W`` (``W`` itself excluded)."""
    W = list(W)
    if not W:
        raise ParameterError("W must be nonempty")
    mask = (1 << G.n) - 1 if S is None else vertex_mask(S)
    for v in W:
        mask &= G.adj[v]
    return frozenset(_bits(mask & ~vertex_mask(W)))


def boundary_edges(G: Graph, A: Iterable[int]) -> EdgeSet:
    """Edges of ``G`` with at least one endpoint in ``A``."""
    A = set(A)
    if any(v < 0 or v >= G.n for v in A):
        raise ParameterError("A must be a subset of the vertex set")
    return frozenset(e for e in G.edges() if e[0] in A or e[1] in A)


def symmetric_difference(G: Graph, T: Iterable[Iterable[int]]) -> Graph:
    return Graph.from_edges(G.n, G.edge_set ^ edge_set(T, G.n))


# -- random graphs ----------------------------------------------------------

@dataclass(frozen=True)
class RngSeed:
    """A (master seed, stream) pair; equal pairs give identical samples."""

    seed: int
    stream: int = 0

    def __post_init__(self):
        if not 0 <= self.seed < 2**64 or self.stream < 0:
            raise ParameterError("seed must be a 64-bit unsigned integer and stream nonnegative")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))


def _as_seed(seed) -> RngSeed:
    return seed if isinstance(seed, RngSeed) else RngSeed(int(seed))


def sample_gnm(n: int, m: int, seed) -> Graph:
    """Uniform random graph with exactly ``m`` edges (Floyd's sampling over pair indices)."""
    N = comb(n, 2)
    if not 0 <= m <= N:
        raise ParameterError(f"m={m} outside [0, {N}]")
    rng = _as_seed(seed).generator()
    chosen: set[int] = set()
    for j in range(N - m, N):
        t = int(rng.integers(0, j + 1))
        chosen.add(j if t in chosen else t)
    mask = 0
    for k in chosen:
        mask |= 1 << k
    return Graph.from_edge_mask(n, mask)


def sample_gnp(n: int, p: float, seed) -> Graph:
    """Binomial random graph: each pair independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p={p} outside [0, 1]")
    rng = _as_seed(seed).generator()
    keep = rng.random(comb(n, 2)) < p
    mask = 0
    for k in np.flatnonzero(keep):
        mask |= 1 << int(k)
    return Graph.from_edge_mask(n, mask)
