import json
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from gammagraph.chains import validate_chain
from gammagraph.errors import GammaGraphError, LinkageError, ModelError, WallError
from gammagraph.generators import (bipartite_model, bipartite_wall_with_linkage, dnl_instance, facially_odd_wall,
                                   odd_model, projective_grid, random_bipartite_labelling, random_closed_chain,
                                   random_graph, random_model)
from gammagraph.graph import enumerate_cycles, find_nonzero_cycle
from gammagraph.groups import make_group
from gammagraph.linkages import purity
from gammagraph.models import classify_model, validate_model
from gammagraph.walls import is_facially_odd, validate_wall

from oracles import label_sum, raw

GOLDEN = Path(__file__).parent / "golden"
Z2, Z3, Z4 = make_group([2]), make_group([3]), make_group([4])


def golden(name):
    return json.loads((GOLDEN / f"{name}.json").read_text())


def test_projective_grid_layout():
    G = projective_grid(3, Z2, 1, 3)
    assert len(G.vertices) == 9 and len(G.edges) == 12 + 3
    _, _, edges = raw(G)
    cross = sorted((u, v) for u, v, w in edges.values() if w == (1,))
    # (1,i) has id i-1 and (3,3-i+1) has id 6+3-i
    assert cross == [(0, 8), (1, 7), (2, 6)]
    with pytest.raises(GammaGraphError):
        projective_grid(3, Z3, 1, 3)
    with pytest.raises(GammaGraphError):
        projective_grid(3, Z2, 0, 3)
    with pytest.raises(GammaGraphError):
        projective_grid(3, Z2, 1, 4)


@pytest.mark.parametrize("n", [3, 4])
def test_projective_parity(n):
    G = projective_grid(n, Z2, 1, n)
    cross = {eid for eid, (u, v, w) in raw(G)[2].items() if w == (1,)}
    for C in enumerate_cycles(G, cap=10**6):
        assert (label_sum(G, C.edges) != (0,)) == (len(cross & set(C.edges)) % 2 == 1)


def test_dnl_instance():
    G = dnl_instance(3, 4, 2)
    assert sorted(w for _, _, w in raw(G)[2].values() if w != (0,)) == [(2,)] * 3
    with pytest.raises(GammaGraphError):
        dnl_instance(3, 4, 4)


def test_facially_odd_wall():
    assert is_facially_odd(facially_odd_wall(3, 3, Z3, weights=1))[0]
    W = facially_odd_wall(4, 5, make_group([2, 3]), seed=11)
    assert is_facially_odd(W)[0] and validate_wall(W) is None
    weights = {(i, j): (i + j) % 3 or 1 for i in range(1, 3) for j in range(1, 3)}
    W = facially_odd_wall(2, 2, Z3, weights=weights)
    assert all(label_sum(W.host, W.brick(*key).edges) == (w,) for key, w in weights.items())
    with pytest.raises(WallError):
        facially_odd_wall(2, 2, Z3, weights={**weights, (1, 1): 0})
    with pytest.raises(WallError):
        facially_odd_wall(2, 2, Z3)


def test_bipartite_wall_with_linkage():
    for kind, ws in (("series", [1, 1]), ("crossing", [1, 1, 1]), ("nested", [2, 1, 1])):
        W, L = bipartite_wall_with_linkage(2, kind, ws, Z3)
        assert purity(L).kind == kind and validate_wall(W) is None
    with pytest.raises(LinkageError):
        bipartite_wall_with_linkage(2, "nested", [1, 0], Z3)
    with pytest.raises(LinkageError):
        bipartite_wall_with_linkage(2, "series", [1, 1, 1], Z3, s=4)


def test_random_bipartite_labelling():
    G = random_graph(6, 10, Z4, seed=1)
    assert all(e.label.is_zero for e in random_bipartite_labelling(G, Z4, seed=2, shifts=0).edges)
    H = random_bipartite_labelling(G, Z4, seed=2, shifts=20)
    assert H == random_bipartite_labelling(G, Z4, seed=2, shifts=20)
    assert find_nonzero_cycle(H) is None


def test_models():
    M = odd_model(6, Z3, seed=0)
    assert classify_model(M)[0] == "gamma_odd" and validate_model(M) is None
    with pytest.raises(ModelError):
        odd_model(4, Z3, edge_weights=0)
    a = odd_model(6, Z3, tree_shapes="random", seed=5)
    assert a.to_json() == odd_model(6, Z3, tree_shapes="random", seed=5).to_json()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_outputs_validate(seed):
    assert validate_model(random_model(5, Z3, seed)) is None
    assert validate_model(bipartite_model(5, Z2, seed)) is None
    assert validate_wall(facially_odd_wall(3, 3, Z3, seed=seed)) is None
    G, ch = random_closed_chain(Z3, 5, seed)
    assert validate_chain(ch, G) is None


def test_golden_fixtures():
    assert projective_grid(3, Z2, 1, 3).to_json() == golden("projective_3")
    assert dnl_instance(3, 4, 2).to_json() == golden("dnl_3_4_2")
    assert facially_odd_wall(3, 3, Z3, seed=1).to_json() == golden("wall_3x3_z3_seed1")
    W, L = bipartite_wall_with_linkage(2, "crossing", [1, 2, 1], Z3)
    assert {"wall": W.to_json(), "linkage": L.to_json()} == golden("linkage_crossing_z3")
    M = odd_model(6, Z3, edge_weights="random", tree_shapes="random", seed=2)
    assert M.to_json() == golden("model_odd_6_z3_seed2")
    G, ch = random_closed_chain(make_group([5]), 4, 3)
    assert {"graph": G.to_json(), "chain": ch.to_json()} == golden("chain_z5_len4_seed3")
