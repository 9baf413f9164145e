import math
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, strategies as st

import _oracles as orc
from rigidcuts.errors import ParameterError, UnsupportedPatternError
from rigidcuts.graph import Graph
from rigidcuts.patterns import (BUILTINS, Pattern, automorphism_count, balance_condition_margin, builtin,
                                chromatic_number, cop_in_turan_plus, cop_polynomial, interpolate, is_edge_critical,
                                is_strictly_2_balanced, parse_pattern, pi_constant, theta_constant, theta_residual,
                                two_density)

K3, K4, K5, C5, C7 = (builtin(x) for x in ("K3", "K4", "K5", "C5", "C7"))
K3_PENDANT = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
TWO_K3 = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


def small_graphs():
    """Atlas graphs on 3..6 vertices with at least two edges."""
    for g in nx.graph_atlas_g():
        if 3 <= g.number_of_nodes() <= 6 and g.number_of_edges() >= 2:
            yield Graph.from_edges(g.number_of_nodes(), g.edges()), g


def test_two_density_examples():
    assert two_density(K3.H) == 2
    assert two_density(K4.H) == Fraction(5, 2)
    assert two_density(C5.H) == Fraction(4, 3)
    with pytest.raises(ParameterError):
        two_density(Graph.path(2))


def test_two_density_agrees_with_edge_subset_sweep():
    for G, g in small_graphs():
        assert two_density(G) == orc.two_density_all_subgraphs(g)
        assert is_strictly_2_balanced(G) == orc.strictly_balanced_all_subgraphs(g)


def test_strict_balance_examples():
    assert is_strictly_2_balanced(K3.H) and is_strictly_2_balanced(K4.H) and is_strictly_2_balanced(C5.H)
    assert not is_strictly_2_balanced(K3_PENDANT)


def test_edge_criticality():
    assert is_edge_critical(K4.H) and is_edge_critical(C5.H)
    assert not is_edge_critical(TWO_K3)
    assert chromatic_number(C5.H) == 3 and chromatic_number(Graph.path(5)) == 2
    assert chromatic_number(Graph.complete(6)) == 6 and chromatic_number(Graph.empty(3)) == 1


def test_chromatic_number_matches_networkx_bounds():
    for G, g in small_graphs():
        chi = chromatic_number(G)
        greedy = max(nx.coloring.greedy_color(g).values()) + 1
        assert chi <= greedy
        assert chi >= max(len(c) for c in nx.find_cliques(g))


def test_automorphisms():
    assert automorphism_count(K4.H) == 24
    assert automorphism_count(C5.H) == 10
    assert automorphism_count(K3_PENDANT) == 2


def test_cop_examples():
    assert cop_in_turan_plus(K3, 2, 3) == 3
    assert cop_in_turan_plus(K3, 2, 5) == 5
    assert cop_in_turan_plus(K4, 3, 4) == 16
    with pytest.raises(ParameterError):
        cop_in_turan_plus(K3, 2, 2)
    with pytest.raises(ParameterError):
        cop_in_turan_plus(K3, 3, 5)


@pytest.mark.parametrize("name,ms", [("K3", range(3, 7)), ("K4", range(4, 6)), ("C5", range(5, 7))])
def test_cop_matches_monomorphism_count(name, ms):
    P = builtin(name)
    H = orc.nx_graph(P.v, P.H.edges())
    for m in ms:
        assert cop_in_turan_plus(P, P.chi - 1, m) == len(orc.copies(orc.turan_plus(P.chi - 1, m), H))


@pytest.mark.parametrize("name,m", [("K3", 6), ("C5", 6), ("K4", 5)])
def test_no_copies_without_the_added_edge(name, m):
    P = builtin(name)
    host = nx.complete_multipartite_graph(*([m] * (P.chi - 1)))
    assert not orc.copies(host, orc.nx_graph(P.v, P.H.edges()))


def test_pi_constants():
    assert pi_constant(K3) == 1 and pi_constant(K4) == 1 and pi_constant(K5) == 1
    assert pi_constant(C5) == 1
    # C5 through the added edge uv: u - b - a - b' - v, so Cop = m(m-1)(m-2)
    m = 40
    assert cop_in_turan_plus(C5, 2, m) == m * (m - 1) * (m - 2)
    assert abs(cop_in_turan_plus(C5, 2, m) / m**3 - float(pi_constant(C5))) <= 0.1
    with pytest.raises(UnsupportedPatternError):
        pi_constant(Pattern(TWO_K3))
    with pytest.raises(UnsupportedPatternError):
        pi_constant(Pattern(Graph.cycle(4)))


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_polynomial_reproduces_samples_and_is_monotone(name):
    P = builtin(name)
    coeffs = cop_polynomial(P)
    assert len(coeffs) == P.v - 1
    prev = 0
    for m in range(P.v, 2 * P.v + 3):
        val = cop_in_turan_plus(P, P.chi - 1, m)
        assert sum(c * m**i for i, c in enumerate(coeffs)) == val
        assert val >= prev
        prev = val
    assert coeffs[-1] > 0


def test_theta_constants():
    assert abs(theta_constant(K3) - math.sqrt(3)) <= 1e-12 * math.sqrt(3)
    assert abs(theta_constant(K4) - (72 / 5) ** 0.2) <= 1e-12 * 1.71
    for P in (K3, K4, K5, C5, C7):
        assert theta_constant(P) > 0
        assert theta_residual(P) <= 1e-10


def test_theta_needs_strict_balance():
    # K4 with a pendant edge: edge-critical, but the K4 inside is denser
    H = Pattern(Graph.from_edges(5, list(Graph.complete(4).edges()) + [(3, 4)]))
    assert H.supported() and not H.strictly_2_balanced
    with pytest.raises(UnsupportedPatternError):
        theta_constant(H)
    assert H.report()["theta"] is None and H.report()["pi"] is not None


def test_report_shape():
    rep = K3.report()
    assert rep == {"v": 3, "e": 3, "chi": 3, "m2": "2/1", "edge_critical": True, "strictly_2_balanced": True,
                   "pi": "1/1", "theta": rep["theta"]}
    assert abs(rep["theta"] - 1.7320508) < 1e-7
    assert C5.report()["m2"] == "4/3"


def test_balance_margin_examples():
    assert abs(balance_condition_margin(K3, K3.H, 100, 100 ** -0.5, 1.0)) < 1e-12
    assert balance_condition_margin(K3, Graph.complete(2), 100, 0.3, 0.5) == 0
    n = 10**4
    assert balance_condition_margin(K4, K3.H, n, n ** -0.4, 1.0) > 0
    with pytest.raises(ParameterError):
        balance_condition_margin(K3, Graph.complete(4), 10, 0.5, 1.0)


@given(st.sampled_from(["K3", "K4", "C5", "K5"]), st.integers(5, 400), st.floats(0.05, 2.0), st.floats(1.0, 3.0))
def test_balance_margin_nonnegative_above_threshold(name, n, eps, scale):
    P = builtin(name)
    p = min(1.0, scale * eps * n ** (-1 / float(P.m2)))
    if p < eps * n ** (-1 / float(P.m2)):
        return
    for k in range(2, P.v + 1):
        for sub in (Graph.complete(k), Graph.path(k)):
            if sub.m and orc.copies(orc.nx_graph(P.v, P.H.edges()), orc.nx_graph(k, sub.edges())):
                balance_condition_margin(P, sub, n, p, eps)


def test_interpolate_exact():
    xs = [1, 2, 3, 4]
    coeffs = interpolate(xs, [x**3 - 2 * x + 5 for x in xs])
    assert coeffs == [5, -2, 0, 1]


def test_parse_pattern():
    assert parse_pattern("C5").H == Graph.cycle(5)
    assert parse_pattern("3 3\n0 1\n1 2\n0 2\n").H == Graph.complete(3)
    with pytest.raises(ParameterError):
        builtin("K9")
    with pytest.raises(ParameterError):
        Pattern(Graph.complete(11))
