import pytest
from hypothesis import given, settings, strategies as st

from gammagraph.decomp import (ShiftCertificate, ShiftDossier, expand_virtual_cycle, is_gamma_bipartite,
                               labelled_three_block, separable_by_two, separable_by_two_exhaustive,
                               shift_reduce, three_blocks)
from gammagraph.errors import GraphError
from gammagraph.generators import random_bipartite_labelling, random_graph
from gammagraph.graph import CycleSpec, LabelledGraph, enumerate_cycles, find_nonzero_cycle, weight
from gammagraph.groups import make_group

from oracles import has_nonzero_cycle_bf, label_sum

Z2, Z3, Z4 = make_group([2]), make_group([3]), make_group([4])


def graph(group, n, pairs, labels=None):
    labels = labels or [0] * len(pairs)
    return LabelledGraph(group, range(n), [(k, u, v, labels[k]) for k, (u, v) in enumerate(pairs)])


K4_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_three_blocks_examples():
    blocks = three_blocks(graph(Z2, 4, K4_PAIRS))
    assert [B.vertices for B in blocks] == [(0, 1, 2, 3)]
    assert all(br.vertices == () for br in blocks[0].bridges)
    bowtie = graph(Z2, 5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)])
    assert sorted(B.vertices for B in three_blocks(bowtie)) == [(0, 1, 2), (2, 3, 4)]
    path = graph(Z2, 5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    assert three_blocks(path) == []


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 7), st.integers(3, 11), st.integers(0, 10**6))
def test_three_blocks_flow_matches_exhaustive(n, m, seed):
    G = random_graph(n, m, Z2, seed, loops=False)
    for u in G.vertices:
        for v in G.vertices:
            if u < v:
                assert separable_by_two(G, u, v) == separable_by_two_exhaustive(G, u, v)
    fast = [B.vertices for B in three_blocks(G)]
    slow = [B.vertices for B in three_blocks(G, exhaustive=True)]
    assert fast == slow


def test_labelled_block_triangle():
    T = graph(Z3, 3, [(0, 1), (1, 2), (2, 0)], [1, 2, 0])
    LB = labelled_three_block(T, three_blocks(T)[0])
    labs = sorted((e.u, e.v, e.label.coords) for e in LB.graph.edges)
    assert labs == [(0, 1, (1,)), (0, 2, (0,)), (1, 2, (2,))]


def test_labelled_block_subdivided_bridge():
    # triangle 0,1,2 plus 0-3-1 with labels 1, 1: a parallel virtual 0-1 edge of weight 2
    G = graph(Z3, 4, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 1)], [0, 0, 0, 1, 1])
    B = [b for b in three_blocks(G) if b.vertices == (0, 1, 2)][0]
    LB = labelled_three_block(G, B)
    labs = sorted(e.label.coords for e in LB.graph.edges if {e.u, e.v} == {0, 1})
    assert labs == [(0,), (2,)]
    for eid, P in LB.witnesses.items():
        assert weight(G, P) == LB.graph.label(eid)


def test_labelled_block_ignores_one_attachment_bridge():
    G = graph(Z3, 5, K4_PAIRS + [(0, 4)], [1] * 7)
    LB = labelled_three_block(G, three_blocks(G)[0])
    assert len(LB.graph.edges) == 6


def test_virtual_cycles_expand_with_equal_weight():
    for seed in range(40):
        G = random_graph(7, 11, Z4, seed, loops=False)
        for B in three_blocks(G):
            LB = labelled_three_block(G, B)
            for C in enumerate_cycles(LB.graph, cap=5000):
                X = expand_virtual_cycle(G, LB, C)
                if X is None:  # a 2-cycle whose two witnesses overlap
                    assert len(C) == 2
                    continue
                assert weight(G, X) == weight(LB.graph, C)


def test_shift_reduce_examples():
    zero = graph(Z2, 4, K4_PAIRS)
    assert isinstance(shift_reduce(zero), ShiftCertificate) and len(shift_reduce(zero)) == 0
    T = graph(Z2, 3, [(0, 1), (1, 2), (2, 0)], [1, 0, 0])
    W = shift_reduce(T)
    assert isinstance(W, CycleSpec) and set(W.edges) == {0, 1, 2}
    with pytest.raises(GraphError):
        shift_reduce(graph(Z3, 2, [(0, 1)], [1]))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 8), st.integers(0, 14), st.integers(0, 10**6), st.integers(0, 12))
def test_shift_reduce_inverts_random_shifts(n, m, seed, k):
    group = make_group([2, 2])
    G = random_bipartite_labelling(random_graph(n, m, group, seed), group, seed, k)
    cert = shift_reduce(G)
    assert isinstance(cert, ShiftCertificate)
    assert all(e.label.is_zero for e in cert.apply(G).edges)


def test_k4_remark_instance():
    G = graph(Z3, 4, K4_PAIRS, [1] * 6)
    # every triangle weighs 0 but the graph is not bipartite
    for C in enumerate_cycles(G):
        if len(C) == 3:
            assert weight(G, C).is_zero
    ok, C = is_gamma_bipartite(G)
    assert ok is False and not weight(G, C).is_zero


def test_forest_is_bipartite():
    ok, dossier = is_gamma_bipartite(graph(Z3, 5, [(0, 1), (1, 2), (1, 3), (3, 4)], [1, 2, 1, 1]))
    assert ok and isinstance(dossier, ShiftDossier)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 8), st.integers(0, 14), st.sampled_from([Z2, Z3, Z4]), st.integers(0, 10**6),
       st.floats(0, 0.9))
def test_structural_test_matches_oracle(n, m, group, seed, bias):
    G = random_graph(n, m, group, seed, zero_bias=bias)
    ok, ev = is_gamma_bipartite(G)
    assert ok == (find_nonzero_cycle(G) is None)
    if not ok:
        assert any(label_sum(G, ev.edges))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 9), st.sampled_from([Z2, Z3]), st.integers(0, 10**6))
def test_structural_test_matches_edge_subset_oracle(n, m, group, seed):
    G = random_graph(n, m, group, seed, zero_bias=0.6)
    assert is_gamma_bipartite(G)[0] == (not has_nonzero_cycle_bf(G))
