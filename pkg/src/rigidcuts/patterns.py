"""Invariants of small pattern graphs H: chromatic number, 2-density, balance,
edge-criticality and the threshold constants pi_H and theta_H.

pi_H is the leading coefficient of m -> Cop(H, K_r(m)+), where r = chi(H) - 1
and K_r(m)+ is the complete balanced r-partite graph with parts of size m plus
one edge inside a part.  Since H is not r-colourable, every copy uses the added
edge, which gives a closed counting formula over r-colourings of H - ab.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations

import networkx as nx

from rigidcuts.errors import ContractError, ParameterError, UnsupportedPatternError
from rigidcuts.graph import Graph, _bits

MAX_PATTERN_VERTICES = 10


def to_networkx(G: Graph) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(G.n))
    g.add_edges_from(G.edges())
    return g


def is_colourable(G: Graph, k: int) -> bool:
    """Backtracking test for a proper k-colouring."""
    if G.n == 0:
        return True
    if k <= 0:
        return False
    order = sorted(range(G.n), key=lambda v: -G.degree(v))
    colour = [-1] * G.n

    def place(i: int, used: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        banned = {colour[u] for u in _bits(G.adj[v])}
        # colours beyond used+1 are symmetric to colour `used`
        for c in range(min(used + 1, k)):
            if c not in banned:
                colour[v] = c
                if place(i + 1, max(used, c + 1)):
                    return True
        colour[v] = -1
        return False

    return place(0, 0)


def chromatic_number(G: Graph) -> int:
    k = 0
    while not is_colourable(G, k):
        k += 1
    return k


def delete_edge(G: Graph, e) -> Graph:
    u, v = e
    adj = list(G.adj)
    adj[u] &= ~(1 << v)
    adj[v] &= ~(1 << u)
    return Graph(G.n, tuple(adj))


def _check_pattern(H: Graph) -> None:
    if H.n > MAX_PATTERN_VERTICES:
        raise ParameterError(f"patterns are limited to {MAX_PATTERN_VERTICES} vertices")


def _induced_edges(H: Graph, S: tuple[int, ...]) -> int:
    mask = 0
    for v in S:
        mask |= 1 << v
    return sum((H.adj[v] & mask).bit_count() for v in S) // 2


def _subset_densities(H: Graph):
    """(S, (e_S - 1)/(|S| - 2)) over vertex subsets with at least two induced edges."""
    for k in range(3, H.n + 1):
        for S in combinations(range(H.n), k):
            e = _induced_edges(H, S)
            if e >= 2:
                yield S, Fraction(e - 1, k - 2)


def two_density(H: Graph) -> Fraction:
    """m_2(H) = max (e_F - 1)/(v_F - 2) over subgraphs F with at least two edges.

    For a fixed vertex set the ratio is largest with every induced edge present,
    so the sweep runs over vertex subsets only.
    """
    _check_pattern(H)
    if H.n < 3 or H.m < 2:
        raise ParameterError("2-density needs at least 3 vertices and 2 edges")
    return max(dens for _, dens in _subset_densities(H))


def is_strictly_2_balanced(H: Graph) -> bool:
    """The 2-density maximum is attained only by H itself."""
    _check_pattern(H)
    if H.n < 3 or H.m < 2:
        raise ParameterError("2-density needs at least 3 vertices and 2 edges")
    whole = Fraction(H.m - 1, H.n - 2)
    # proper subgraphs on all of V(H) drop edges and so have smaller ratio
    return all(dens < whole for S, dens in _subset_densities(H) if len(S) < H.n)


def is_edge_critical(H: Graph) -> bool:
    """Removing some edge lowers the chromatic number."""
    if H.m == 0:
        raise ParameterError("edge-criticality needs at least one edge")
    chi = chromatic_number(H)
    return any(chromatic_number(delete_edge(H, e)) == chi - 1 for e in H.edges())


def automorphism_count(H: Graph) -> int:
    g = to_networkx(H)
    return sum(1 for _ in nx.algorithms.isomorphism.GraphMatcher(g, g).isomorphisms_iter())


def _falling(x: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= x - i
    return out


def _colour_class_sizes(H: Graph, r: int, a: int, b: int):
    """Class-size vectors of proper r-colourings of H - ab with a, b in class 0.

    Vertices a and b are excluded from the counts.
    """
    rest = [v for v in range(H.n) if v not in (a, b)]
    colour = [-1] * H.n
    colour[a] = colour[b] = 0
    sizes = [0] * r

    def rec(i: int):
        if i == len(rest):
            yield tuple(sizes)
            return
        v = rest[i]
        for c in range(r):
            if all(colour[u] != c for u in _bits(H.adj[v])):
                colour[v] = c
                sizes[c] += 1
                yield from rec(i + 1)
                sizes[c] -= 1
                colour[v] = -1

    yield from rec(0)


def _embeddings_through_added_edge(H: Graph, r: int, m: int) -> int:
    total = 0
    for u, v in H.edges():
        for a, b in ((u, v), (v, u)):
            for sizes in _colour_class_sizes(H, r, a, b):
                term = _falling(m - 2, sizes[0])
                for s in sizes[1:]:
                    term *= _falling(m, s)
                total += term
    return total


@dataclass(frozen=True)
class Pattern:
    """A small pattern graph with lazily computed constants."""

    H: Graph
    name: str = ""

    def __post_init__(self):
        _check_pattern(self.H)

    @property
    def v(self) -> int:
        return self.H.n

    @property
    def e(self) -> int:
        return self.H.m

    @cached_property
    def chi(self) -> int:
        return chromatic_number(self.H)

    @cached_property
    def m2(self) -> Fraction:
        return two_density(self.H)

    @cached_property
    def edge_critical(self) -> bool:
        return is_edge_critical(self.H)

    @cached_property
    def strictly_2_balanced(self) -> bool:
        return is_strictly_2_balanced(self.H)

    @cached_property
    def automorphisms(self) -> int:
        return automorphism_count(self.H)

    @cached_property
    def pi(self) -> Fraction:
        return pi_constant(self)

    @cached_property
    def theta(self) -> float:
        return theta_constant(self)

    def supported(self) -> bool:
        return self.chi >= 3 and self.edge_critical

    def report(self) -> dict:
        out = {
            "v": self.v,
            "e": self.e,
            "chi": self.chi,
            "m2": f"{self.m2.numerator}/{self.m2.denominator}",
            "edge_critical": self.edge_critical,
            "strictly_2_balanced": self.strictly_2_balanced,
            "pi": None,
            "theta": None,
        }
        if self.supported():
            out["pi"] = f"{self.pi.numerator}/{self.pi.denominator}"
            if self.strictly_2_balanced:
                out["theta"] = self.theta
        return out

    def to_json(self) -> str:
        return json.dumps(self.report(), separators=(",", ":"))


def as_pattern(H: Pattern | Graph) -> Pattern:
    return H if isinstance(H, Pattern) else Pattern(H)


BUILTINS = {
    "K3": lambda: Graph.complete(3),
    "K4": lambda: Graph.complete(4),
    "K5": lambda: Graph.complete(5),
    "C5": lambda: Graph.cycle(5),
    "C7": lambda: Graph.cycle(7),
}


def builtin(name: str) -> Pattern:
    try:
        return Pattern(BUILTINS[name](), name)
    except KeyError:
        raise ParameterError(f"unknown pattern {name!r}; built-ins are {sorted(BUILTINS)}") from None


def cop_in_turan_plus(H: Pattern | Graph, r: int, m: int) -> int:
    """Number of copies of H in K_r(m)+ (all of which use the added edge)."""
    P = as_pattern(H)
    if r != P.chi - 1:
        raise ParameterError(f"r must equal chi(H) - 1 = {P.chi - 1}")
    if m < P.v:
        raise ParameterError(f"part size m={m} below v_H={P.v}")
    emb = _embeddings_through_added_edge(P.H, r, m)
    copies, rem = divmod(emb, P.automorphisms)
    if rem:
        raise ContractError("embedding count not divisible by |Aut(H)|")
    return copies


def interpolate(xs, ys) -> list[Fraction]:
    """Coefficients (constant term first) of the Lagrange interpolant, exactly."""
    k = len(xs)
    coeffs = [Fraction(0)] * k
    for i in range(k):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(k):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xs[j] * basis[t + 1]
            denom *= xs[i] - xs[j]
        for t in range(k):
            coeffs[t] += Fraction(ys[i]) * basis[t] / denom
    return coeffs


def cop_polynomial(H: Pattern | Graph) -> list[Fraction]:
    """Exact coefficients of m -> Cop(H, K_r(m)+), degree at most v_H - 2."""
    P = as_pattern(H)
    if not P.supported():
        raise UnsupportedPatternError("pi_H is defined only for nonbipartite edge-critical patterns")
    xs = list(range(P.v, 2 * P.v))
    ys = [cop_in_turan_plus(P, P.chi - 1, m) for m in xs]
    coeffs = interpolate(xs, ys)
    # one sample more than the degree needs: the top coefficient must vanish
    if coeffs[-1] != 0:
        raise ContractError("copy count is not a polynomial of degree v_H - 2")
    return coeffs[:-1]


def pi_constant(H: Pattern | Graph) -> Fraction:
    P = as_pattern(H)
    return cop_polynomial(P)[P.v - 2]


def theta_constant(H: Pattern | Graph) -> float:
    """Positive root of (chi-1)^(2-v) * pi * theta^(e-1) = 2 - 1/m2."""
    P = as_pattern(H)
    if not P.supported() or not P.strictly_2_balanced:
        raise UnsupportedPatternError("theta_H needs a strictly 2-balanced, nonbipartite, edge-critical pattern")
    rhs = 2 - 1 / P.m2
    coef = Fraction(P.chi - 1) ** (2 - P.v) * P.pi
    return float(rhs / coef) ** (1.0 / (P.e - 1))


def theta_residual(H: Pattern | Graph, theta: float | None = None) -> float:
    P = as_pattern(H)
    t = P.theta if theta is None else theta
    coef = float(Fraction(P.chi - 1) ** (2 - P.v) * P.pi)
    return abs(coef * t ** (P.e - 1) - float(2 - 1 / P.m2))


def is_subgraph(H: Graph, F: Graph) -> bool:
    """F is isomorphic to a (not necessarily induced) subgraph of H."""
    if F.n > H.n or F.m > H.m:
        return False
    matcher = nx.algorithms.isomorphism.GraphMatcher(to_networkx(H), to_networkx(F))
    return matcher.subgraph_is_monomorphic()


def balance_condition_margin(H: Pattern | Graph, Hp: Graph, n: int, p: float, eps: float) -> float:
    """n^(v' - 2) p^(e' - 1) - eps^(e' - 1) for a nonempty subgraph H' of H.

    When p >= eps * n^(-1/m2(H)) the margin is nonnegative; a negative value
    there raises a contract error.
    """
    P = as_pattern(H)
    if Hp.m == 0:
        raise ParameterError("H' must have at least one edge")
    if not is_subgraph(P.H, Hp):
        raise ParameterError("H' is not a subgraph of H")
    margin = n ** (Hp.n - 2) * p ** (Hp.m - 1) - eps ** (Hp.m - 1)
    if n < 1 or eps <= 0:
        raise ParameterError("need n >= 1 and eps > 0")
    if P.e >= 2 and p >= eps * n ** (-1 / float(P.m2)):
        scale = max(1.0, eps ** (Hp.m - 1))
        if margin < -1e-9 * scale:
            raise ContractError(f"margin {margin} negative under the density precondition")
    return margin


def parse_pattern(spec: str) -> Pattern:
    """A built-in name, or edge-list text (``n m`` header then ``u v`` lines)."""
    if spec in BUILTINS:
        return builtin(spec)
    from rigidcuts.graphio import from_edge_list
    return Pattern(from_edge_list(spec))
