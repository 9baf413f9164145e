from math import comb

import pytest
from hypothesis import given, strategies as st

import _oracles as orc
from conftest import graphs, pair_sets
from rigidcuts.cuts import enumerate_cuts, max_cut
from rigidcuts.equivalence import (core_refines, equivalence, in_core_class, is_rigid, non_rigidity_witnesses,
                                   refines, select_core, x_r)
from rigidcuts.errors import ContractError, ParameterError
from rigidcuts.graph import Graph, RngSeed, sample_gnm, symmetric_difference

S = frozenset


def test_c4_examples(c4):
    E = equivalence(c4, 2, 0)
    assert E.components == (S({0, 2}), S({1, 3}))
    assert E.core == (S({0, 2}), S({1, 3})) and E.x_r == 0
    E = equivalence(c4, 2, 2)
    assert E.pairs == frozenset() and E.core is None and E.x_r == 4


def test_k4_has_no_core():
    E = equivalence(Graph.complete(4), 2, 0)
    assert E.pairs == frozenset() and E.core is None


def test_rigidity_examples(c4):
    assert is_rigid(c4, 2, 0, 0.5)
    assert not is_rigid(Graph.complete(4), 2, 0, 0.99)
    assert not is_rigid(Graph.empty(4), 2, 0, 0.1)
    with pytest.raises(ParameterError):
        is_rigid(c4, 2, 0, 1.0)


def test_core_class_examples(c4):
    assert in_core_class(c4, 2, 0, 0.1)
    assert not in_core_class(Graph.complete(4), 2, 0, 0.3)
    assert in_core_class(Graph.complete_multipartite(3, 3), 2, 0, 0)
    with pytest.raises(ParameterError):
        in_core_class(c4, 2, 0, 1)


def test_x_r_examples():
    assert x_r(Graph.complete_multipartite(3, 3), 2) == 0
    assert x_r(Graph.complete(4), 2) == 4
    assert x_r(Graph.from_edges(5, Graph.cycle(4).edges()), 2) == 1


def test_core_refines_examples(c4):
    assert core_refines(c4, [], 2, 0)
    # host budget 1 on C4, then toggle the diagonal 02
    host = equivalence(c4, 2, 1)
    other = equivalence(symmetric_difference(c4, [(0, 2)]), 2, 0)
    assert core_refines(c4, [(0, 2)], 2, 0) == (other.core is not None and refines(host.core, other.core))
    with pytest.raises(ContractError):
        core_refines(Graph.complete(4), [], 2, 0)


def test_core_refines_random_small_graphs():
    for s in range(300):
        G = sample_gnm(8, 10 + s % 12, RngSeed(5, s))
        for T in ([], [(0, 1)], [(2, 5), (3, 7)]):
            if equivalence(G, 2, len(T)).core is not None:
                assert core_refines(G, T, 2, 0)


def test_witness_examples():
    assert non_rigidity_witnesses(Graph.complete(4), 2, 0, (0, 0, 1, 1)) == frozenset()
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    X = non_rigidity_witnesses(star, 2, 3)
    E = equivalence(star, 2, 3)
    assert all(len(E.component_of(v)) == 1 for v in X)
    G = sample_gnm(7, 9, RngSeed(1))
    big = 2 * max(G.degree(v) for v in range(G.n))
    assert non_rigidity_witnesses(G, 2, big) == frozenset(range(7))
    assert equivalence(G, 2, big).pairs == frozenset()
    with pytest.raises(ParameterError):
        non_rigidity_witnesses(Graph.complete(4), 2, 0, (0, 0, 0, 1))


def test_select_core_strict_threshold():
    # n = 6, r = 2: the threshold is n/(r+1) = 2, and size 2 is not enough
    comps = [S({0, 1}), S({2, 3}), S({4, 5})]
    assert select_core(comps, 6, 2) is None
    comps = [S({0, 1, 2}), S({3, 4}), S({5})]
    assert select_core(comps, 6, 2) is None
    comps = [S({0, 1, 2}), S({3, 4, 5})]
    assert select_core(comps, 6, 2) == tuple(comps)


def test_minus_one_budget_is_lexmin_max_cut(c4):
    E = equivalence(Graph.complete(4), 2, -1)
    assert E.components == (S({0, 1}), S({2, 3}))
    assert E.components == tuple(sorted((p for p in max_cut(Graph.complete(4), 2).parts if p), key=min))


def test_json_export(c4):
    assert equivalence(c4, 2, 0).to_json() == '{"r":2,"d":0,"components":[[0,2],[1,3]],"core":[[0,2],[1,3]],"x_r":0}'


@given(graphs(max_n=7), st.integers(2, 3), st.integers(0, 3))
def test_pairs_match_oracle(G, r, d):
    E = equivalence(G, r, d)
    expect = orc.equivalent_pairs(G.n, r, G.edges(), d)
    assert E.pairs == expect
    assert E.num_pairs == len(expect)
    assert list(E.components) == orc.classes(G.n, expect)


@given(graphs(max_n=8), st.integers(2, 3), st.integers(0, 3))
def test_structure_invariants(G, r, d):
    E = equivalence(G, r, d)
    assert sorted(v for X in E.components for v in X) == list(range(G.n))
    assert E.pairs == {(u, v) for X in E.components for u in X for v in X if u < v}
    assert equivalence(G, r, d + 1).pairs <= E.pairs
    if E.core is not None:
        assert len(E.core) == r and all(len(X) * (r + 1) > G.n for X in E.core)
        assert E.x_r == G.n - sum(map(len, E.core))
    else:
        assert E.x_r == G.n
    fam = enumerate_cuts(G, r, d)
    for X in E.components:
        for c in fam:
            assert len({c.assign[v] for v in X}) == 1


@given(graphs(max_n=8), st.integers(2, 3), st.integers(0, 3))
def test_witnesses_are_singletons(G, r, d):
    E = equivalence(G, r, d)
    for v in non_rigidity_witnesses(G, r, d):
        assert E.component_of(v) == {v}


@given(st.data())
def test_core_refines_property(data):
    G = data.draw(graphs(min_n=2, max_n=8))
    T = data.draw(pair_sets(G.n, max_size=2))
    d = data.draw(st.integers(0, 2))
    if equivalence(G, 2, d + len(T)).core is not None:
        assert core_refines(G, T, 2, d)


@given(graphs(max_n=8))
def test_x_r_zero_and_max_cut_uniqueness(G):
    # with x_r = 0 every max cut is constant on the r core classes; it is unique
    # unless two classes have no edge between them and can share a part
    E = equivalence(G, 2, 0)
    if E.core is None or E.x_r != 0:
        return
    A, B = E.core
    linked = any(G.has_edge(u, v) for u in A for v in B)
    fam = enumerate_cuts(G, 2, 0)
    assert (len(fam) == 1) == linked


def test_x_r_zero_without_unique_max_cut():
    # two isolated vertices: both singletons exceed 2/3, yet the cut with an empty part is also maximum
    G = Graph.empty(2)
    assert x_r(G, 2) == 0
    assert len(enumerate_cuts(G, 2, 0)) == 2


def test_unique_max_cut_with_empty_part_has_no_core():
    # the empty graph on one vertex: one max cut, but a part is empty
    G = Graph.empty(1)
    assert len(enumerate_cuts(G, 2, 0)) == 1
    assert x_r(G, 2) == 1


def test_rigid_threshold_is_exact(c4):
    # |eq| = 2 and C(4,2) = 6: rigid iff 2 >= (1 - eps) * 3
    assert is_rigid(c4, 2, 0, 1 / 3 + 1e-9)
    assert not is_rigid(c4, 2, 0, 1 / 3 - 1e-9)
    assert comb(4, 2) == 6
