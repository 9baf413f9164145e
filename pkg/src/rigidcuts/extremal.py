"""Copies of a pattern H, maximum H-free subgraphs and the Janson quantities.

Edge sets of K_n are encoded as Python int bitmasks over colex pair indices
(see :mod:`rigidcuts.graph`), so containment and intersection are mask algebra.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from rigidcuts.equivalence import core_meets_alpha, equivalence
from rigidcuts.errors import DeskScaleError, ParameterError
from rigidcuts.graph import EdgeSet, Graph, _bits, edge_set, normalize_pair, pair_from_index, pair_index
from rigidcuts.patterns import Pattern, as_pattern, is_colourable

MAX_COPIES = 200_000
HITTING_NODE_LIMIT = 5_000_000


def mask_of(pairs: Iterable[Iterable[int]]) -> int:
    mask = 0
    for u, v in pairs:
        mask |= 1 << pair_index(u, v)
    return mask


def pairs_of(mask: int) -> EdgeSet:
    return frozenset(pair_from_index(k) for k in _bits(mask))


def _search_order(H: Graph, first: list[int]) -> list[int]:
    """H's vertices with each one (after ``first``) adjacent to many placed ones."""
    order = list(first)
    rest = set(range(H.n)) - set(order)
    while rest:
        placed = 0
        for v in order:
            placed |= 1 << v
        w = max(rest, key=lambda x: ((H.adj[x] & placed).bit_count(), H.degree(x), -x))
        order.append(w)
        rest.remove(w)
    return order


def embeddings(host: Graph, H: Graph, fixed: dict[int, int] | None = None) -> Iterator[tuple[int, ...]]:
    """Injective edge-preserving maps V(H) -> V(host), as image tuples.

    ``fixed`` pins some pattern vertices to host vertices.
    """
    fixed = dict(fixed or {})
    if len(set(fixed.values())) != len(fixed):
        return
    for a, x in fixed.items():
        for b, y in fixed.items():
            if H.has_edge(a, b) and not host.has_edge(x, y):
                return
    order = _search_order(H, list(fixed))
    image = [-1] * H.n
    for a, x in fixed.items():
        image[a] = x
    everyone = (1 << host.n) - 1
    k0 = len(fixed)
    used0 = 0
    for x in fixed.values():
        used0 |= 1 << x

    def rec(i: int, used: int):
        if i == H.n:
            yield tuple(image)
            return
        w = order[i]
        cand = everyone
        for a in _bits(H.adj[w]):
            if image[a] >= 0:
                cand &= host.adj[image[a]]
        cand &= ~used
        for x in _bits(cand):
            image[w] = x
            yield from rec(i + 1, used | (1 << x))
        image[w] = -1

    yield from rec(k0, used0)


def _image_mask(H: Graph, image: tuple[int, ...]) -> int:
    mask = 0
    for a, b in H.edges():
        mask |= 1 << pair_index(image[a], image[b])
    return mask


def copy_masks(host: Graph, H: Pattern | Graph) -> list[int]:
    """Edge masks of all copies of H in ``host``, sorted."""
    P = as_pattern(H)
    seen: set[int] = set()
    for image in embeddings(host, P.H):
        seen.add(_image_mask(P.H, image))
        if len(seen) > MAX_COPIES:
            raise DeskScaleError(f"more than {MAX_COPIES} copies of H")
    return sorted(seen)


def _copies_through(host: Graph, H: Graph, e) -> set[int]:
    """Masks of copies of H in ``host`` that contain the pair e (host must contain e)."""
    u, v = e
    out: set[int] = set()
    for a, b in H.edges():
        for x, y in ((u, v), (v, u)):
            for image in embeddings(host, H, {a: x, b: y}):
                out.add(_image_mask(H, image))
                if len(out) > MAX_COPIES:
                    raise DeskScaleError(f"more than {MAX_COPIES} copies of H")
    return out


@dataclass(frozen=True)
class CopyHypergraph:
    """Copies of H (or copies minus a designated pair e) as edge masks over K_n."""

    n: int
    pattern: Pattern
    edges: tuple[int, ...]
    designated: tuple[int, int] | None = None

    def __len__(self) -> int:
        return len(self.edges)

    def members(self) -> list[EdgeSet]:
        return [pairs_of(m) for m in self.edges]

    def restrict(self, A: Iterable[Iterable[int]] | int) -> CopyHypergraph:
        """The members contained in A (the subhypergraph induced by A)."""
        a = A if isinstance(A, int) else mask_of(edge_set(A, self.n))
        return CopyHypergraph(self.n, self.pattern, tuple(m for m in self.edges if m & ~a == 0), self.designated)

    def union(self, other: CopyHypergraph) -> CopyHypergraph:
        if other.n != self.n:
            raise ParameterError("hypergraphs live on different vertex sets")
        return CopyHypergraph(self.n, self.pattern, tuple(sorted(set(self.edges) | set(other.edges))), None)

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n,
            "designated": list(self.designated) if self.designated else None,
            "members": [sorted(map(list, pairs_of(m))) for m in self.edges],
        }, separators=(",", ":"))


def copy_hypergraph(n: int, H: Pattern | Graph, host: Graph | None = None) -> CopyHypergraph:
    """All copies of H in K_n (or in ``host``)."""
    P = as_pattern(H)
    G = Graph.complete(n) if host is None else host
    if G.n != n:
        raise ParameterError("host must have n vertices")
    return CopyHypergraph(n, P, tuple(copy_masks(G, P)))


def _check_pair(e, n: int) -> tuple[int, int]:
    (pair,) = edge_set([e], n)
    return pair


def partial_hypergraph(n: int, H: Pattern | Graph, e) -> CopyHypergraph:
    """{K - e : e in K, K a copy of H in K_n}."""
    P = as_pattern(H)
    e = _check_pair(e, n)
    bit = 1 << pair_index(*e)
    members = sorted(m ^ bit for m in _copies_through(Graph.complete(n), P.H, e))
    return CopyHypergraph(n, P, tuple(members), e)


def partial_copy_count(H: Pattern | Graph, e, A: Iterable[Iterable[int]], n: int | None = None) -> int:
    """Number of members of the e-link hypergraph contained in A.

    Equivalently, copies of H inside A + e that use e.
    """
    P = as_pattern(H)
    A = list(A)
    if n is None:
        n = 1 + max([max(e)] + [max(p) for p in A])
    e = _check_pair(e, n)
    host = Graph.from_edges(n, edge_set(A, n) | {e})
    return len(_copies_through(host, P.H, e))


def janson_mu(hg: CopyHypergraph | Iterable[int], p):
    """Sum over members A of p^|A|."""
    members = hg.edges if isinstance(hg, CopyHypergraph) else tuple(hg)
    return sum((p ** m.bit_count() for m in members), 0 * p)


def janson_delta(hg: CopyHypergraph | Iterable[int], p):
    """Sum over unordered pairs of distinct intersecting members of p^|A u B|."""
    members = sorted(set(hg.edges if isinstance(hg, CopyHypergraph) else hg))
    # bucket by pair index so only intersecting pairs are visited
    by_pair: dict[int, list[int]] = {}
    for i, m in enumerate(members):
        for k in _bits(m):
            by_pair.setdefault(k, []).append(i)
    total = 0 * p
    for i, A in enumerate(members):
        partners = set()
        for k in _bits(A):
            partners.update(j for j in by_pair[k] if j > i)
        for j in sorted(partners):
            total += p ** (A | members[j]).bit_count()
    return total


def delta_bound_check(H: Pattern | Graph, e, f, n: int, p) -> tuple[float, float]:
    """(Delta_p of the union of the e- and f-link hypergraphs, (n^(v-2) p^(e_H-1))^2)."""
    P = as_pattern(H)
    e, f = _check_pair(e, n), _check_pair(f, n)
    if e == f:
        raise ParameterError("e and f must be distinct")
    hg = partial_hypergraph(n, P, e).union(partial_hypergraph(n, P, f))
    lhs = janson_delta(hg, p)
    scale = (n ** (P.v - 2) * p ** (P.e - 1)) ** 2
    return lhs, scale


# -- maximum H-free subgraphs -------------------------------------------------

class _HittingSearch:
    """Minimum hitting sets of a family of edge masks by disjoint branching.

    At each node an unhit member with allowed edges a_1..a_t is chosen; branch i
    puts a_i in the set and forbids a_1..a_{i-1}, so each hitting set is reached
    along one path only.  The lower bound is a greedy packing of unhit members
    whose allowed edges are pairwise disjoint.
    """

    def __init__(self, members: list[int], node_limit: int):
        self.members = members
        self.node_limit = node_limit
        self.nodes = 0

    def _bound(self, unhit: list[int], forbidden: int) -> int:
        used = 0
        count = 0
        for m in sorted(unhit, key=lambda x: (x & ~forbidden).bit_count()):
            free = m & ~forbidden
            if free & used == 0:
                used |= free
                count += 1
        return count

    def run(self, limit: int, collect: bool) -> tuple[int, list[int]]:
        """With collect=False: optimum size (searching below ``limit``) and one set.

        With collect=True: every hitting set of size exactly ``limit``.
        """
        self.best = limit
        self.found: list[int] = []
        self._rec(0, 0, 0, list(self.members), collect)
        return self.best, self.found

    def _rec(self, chosen: int, size: int, forbidden: int, unhit: list[int], collect: bool):
        self.nodes += 1
        if self.nodes > self.node_limit:
            raise DeskScaleError(f"hitting-set search exceeded {self.node_limit} nodes")
        if not unhit:
            if collect:
                if size == self.best:
                    self.found.append(chosen)
            elif size < self.best:
                self.best = size
                self.found = [chosen]
            return
        lb = self._bound(unhit, forbidden)
        if collect and size + lb > self.best:
            return
        if not collect and size + lb >= self.best:
            return
        target = min(unhit, key=lambda x: ((x & ~forbidden).bit_count(), x))
        free = target & ~forbidden
        if free == 0:
            return
        banned = forbidden
        for k in _bits(free):
            bit = 1 << k
            rest = [m for m in unhit if not m & bit]
            self._rec(chosen | bit, size + 1, banned, rest, collect)
            banned |= bit


def max_h_free_subgraph(G: Graph, H: Pattern | Graph, node_limit: int = HITTING_NODE_LIMIT) -> tuple[int, list[EdgeSet]]:
    """Largest H-free subgraph size and all maximum witnesses (labeled, sorted)."""
    P = as_pattern(H)
    members = copy_masks(G, P)
    if not members:
        return G.m, [G.edge_set]
    search = _HittingSearch(members, node_limit)
    # any single edge per copy is a hitting set, so G.m + 1 is a safe start
    opt, _ = search.run(G.m + 1, collect=False)
    _, sets = search.run(opt, collect=True)
    gmask = G.edge_mask
    witnesses = sorted((pairs_of(gmask & ~S) for S in sets), key=lambda W: sorted(W))
    return G.m - opt, witnesses


def is_h_simonovits(G: Graph, H: Pattern | Graph) -> bool:
    """Every largest H-free subgraph of G is (chi(H) - 1)-colourable."""
    P = as_pattern(H)
    _, witnesses = max_h_free_subgraph(G, P)
    return all(is_colourable(Graph.from_edges(G.n, W), P.chi - 1) for W in witnesses)


# -- the event Y_e --------------------------------------------------------------

def _core_pairs(core) -> tuple[EdgeSet, int]:
    internal = set()
    for X in core:
        internal.update(combinations(sorted(X), 2))
    return frozenset(internal), mask_of(internal)


def _y_edges(G: Graph, P: Pattern, alpha) -> list[tuple[int, int]]:
    r = P.chi - 1
    S = equivalence(G, r, 0)
    if not core_meets_alpha(S, alpha):
        return []
    internal, imask = _core_pairs(S.core)
    full = (1 << (G.n * (G.n - 1) // 2)) - 1
    outside = G.edge_mask & full & ~imask  # ext*(core) intersected with G
    host_pairs = pairs_of(outside)
    out = []
    for e in sorted(internal & G.edge_set):
        if partial_copy_count(P, e, host_pairs, G.n) == 0:
            out.append(e)
    return out


def _check_alpha(alpha) -> None:
    if not 0 <= alpha < 1:
        raise ParameterError(f"alpha={alpha} outside [0, 1)")


def y_event_check(G: Graph, H: Pattern | Graph, e, alpha) -> bool:
    """G in CORE_0^r(alpha), e inside a core component and in G, and no e-link
    member inside ext*(core) intersected with G."""
    _check_alpha(alpha)
    P = as_pattern(H)
    e = normalize_pair(*_check_pair(e, G.n))
    if not G.has_edge(*e):
        return False
    return e in _y_edges(G, P, alpha)


def count_y_edges(G: Graph, H: Pattern | Graph, alpha) -> int:
    _check_alpha(alpha)
    return len(_y_edges(G, as_pattern(H), alpha))
