"""(d, r)-equivalence, components, cores, rigidity and x_r.

Two vertices are equivalent when no canonical r-cut with deficit at most d
separates them, i.e. when their columns in the assignment matrix of the
deficit-bounded cut family coincide.  Components are therefore read off by
grouping identical columns.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from rigidcuts.cuts import Cut, cut_size, enumerate_assignments, max_cut, max_cut_size
from rigidcuts.errors import ContractError, ParameterError
from rigidcuts.graph import EdgeSet, Graph, edge_set, symmetric_difference

Component = frozenset[int]


@dataclass(frozen=True)
class EquivStructure:
    n: int
    r: int
    d: int
    components: tuple[Component, ...]  # ordered by smallest vertex
    core: tuple[Component, ...] | None  # ordered by smallest vertex

    @property
    def pairs(self) -> EdgeSet:
        return frozenset((u, v) for X in self.components for u in X for v in X if u < v)

    @property
    def num_pairs(self) -> int:
        return sum(comb(len(X), 2) for X in self.components)

    @property
    def x_r(self) -> int:
        if self.core is None:
            return self.n
        return self.n - sum(len(X) for X in self.core)

    def component_of(self, v: int) -> Component:
        for X in self.components:
            if v in X:
                return X
        raise ParameterError(f"vertex {v} outside [0, {self.n})")

    def equivalent(self, u: int, v: int) -> bool:
        return v in self.component_of(u)

    def to_json(self) -> str:
        return json.dumps({
            "r": self.r,
            "d": self.d,
            "components": [sorted(X) for X in self.components],
            "core": None if self.core is None else [sorted(X) for X in self.core],
            "x_r": self.x_r,
        }, separators=(",", ":"))


def select_core(components: Sequence[Component], n: int, r: int) -> tuple[Component, ...] | None:
    """The r largest components if each has more than n/(r+1) vertices, else None.

    Ties in size are broken by smallest vertex.
    """
    ranked = sorted(components, key=lambda X: (-len(X), min(X)))
    if len(ranked) < r:
        return None
    top = ranked[:r]
    if any(len(X) * (r + 1) <= n for X in top):
        return None
    return tuple(sorted(top, key=min))


def components_from_assignments(rows: np.ndarray, n: int) -> tuple[Component, ...]:
    """Classes of vertices whose columns agree in every row."""
    if n == 0:
        return ()
    _, labels = np.unique(np.asarray(rows).T, axis=0, return_inverse=True)
    groups: dict[int, list[int]] = {}
    for v, lab in enumerate(np.ravel(labels)):
        groups.setdefault(int(lab), []).append(v)
    return tuple(sorted((frozenset(g) for g in groups.values()), key=min))


def structure_from_components(components, n: int, r: int, d: int) -> EquivStructure:
    comps = tuple(sorted((frozenset(X) for X in components), key=min))
    return EquivStructure(n, r, d, comps, select_core(comps, n, r))


def equivalence(G: Graph, r: int = 2, d: int = 0) -> EquivStructure:
    """eq_d^r(G) with its components and (d, r)-core.

    ``d = -1`` gives the partition into the nonempty parts of the
    lexicographically least canonical maximum cut.
    """
    if d < -1:
        raise ParameterError("deficit budget must be at least -1")
    if d == -1:
        parts = [P for P in max_cut(G, r).parts if P] if G.n else []
        return structure_from_components(parts, G.n, r, d)
    _, rows, _ = enumerate_assignments(G, r, d)
    return structure_from_components(components_from_assignments(rows, G.n), G.n, r, d)


def _fraction(x, name: str, lo_open: bool = True) -> Fraction:
    f = Fraction(x)
    if not (0 < f < 1 if lo_open else 0 <= f < 1):
        raise ParameterError(f"{name}={x} outside {'(0, 1)' if lo_open else '[0, 1)'}")
    return f


def is_rigid(G: Graph, r: int, d: int, eps) -> bool:
    """At least (1 - eps)/r * C(n, 2) pairs are (d, r)-equivalent."""
    e = _fraction(eps, "eps")
    return equivalence(G, r, d).num_pairs >= (1 - e) / r * comb(G.n, 2)


def core_meets_alpha(S: EquivStructure, alpha) -> bool:
    a = Fraction(alpha)
    if S.core is None:
        return False
    return min(len(X) for X in S.core) >= Fraction(S.n, S.r) - a * S.n


def in_core_class(G: Graph, r: int, d: int, alpha) -> bool:
    """Membership in CORE_d^r(alpha): a core whose components all have >= n/r - alpha*n vertices."""
    a = _fraction(alpha, "alpha", lo_open=False)
    return core_meets_alpha(equivalence(G, r, d), a)


def refines(C: Iterable[Iterable[int]], D: Iterable[Iterable[int]]) -> bool:
    """Every set of ``C`` lies inside some set of ``D``."""
    D = [frozenset(Y) for Y in D]
    return all(any(frozenset(X) <= Y for Y in D) for X in C)


def core_refines(G: Graph, T: Iterable[Iterable[int]], r: int, d: int) -> bool:
    """G △ T has a (d, r)-core refined by the (d + |T|, r)-core of G."""
    T = edge_set(T, G.n)
    host = equivalence(G, r, d + len(T))
    if host.core is None:
        raise ContractError(f"G has no ({d + len(T)}, {r})-core")
    other = equivalence(symmetric_difference(G, T), r, d)
    return other.core is not None and refines(host.core, other.core)


def non_rigidity_witnesses(G: Graph, r: int, d: int, cut: Cut | Sequence[int] | None = None) -> frozenset[int]:
    """Vertices v with r*deg(v, own part) >= deg(v) - (r-1)*d in a maximum cut.

    Uses the lexicographically least maximum cut unless one is supplied.  Each
    such vertex forms a singleton (d, r)-component.
    """
    if d < 0:
        raise ParameterError("deficit budget must be nonnegative")
    if cut is None:
        assign = max_cut(G, r).assign
    else:
        assign = cut.assign if isinstance(cut, Cut) else tuple(cut)
        if len(assign) != G.n:
            raise ParameterError("cut length must equal n")
        if cut_size(G, assign) != max_cut_size(G, r):
            raise ParameterError("supplied cut is not a maximum cut")
    out = set()
    for v in range(G.n):
        own = sum(1 for u in G.neighbours(v) if assign[u] == assign[v])
        if r * own >= G.degree(v) - (r - 1) * d:
            out.add(v)
    return frozenset(out)


def x_r(G: Graph, r: int = 2) -> int:
    """Number of vertices outside the (0, r)-core (n when there is none)."""
    return equivalence(G, r, 0).x_r
