import json

import networkx as nx
import pytest

from morsekit.graphs import (
    Graph,
    a,
    are_isomorphic,
    b,
    build_complete,
    build_complete_bipartite,
    build_cycle,
    build_gmd,
    categorical_product,
    graph_from_json,
    residue,
)


def to_nx(G):
    g = nx.Graph()
    g.add_nodes_from(range(G.n))
    g.add_edges_from((G.index(u), G.index(v)) for u, v in G.edges())
    return g


def test_residue_maps_zero_to_m():
    assert residue(0, 5) == 5
    assert residue(5, 5) == 5
    assert residue(6, 5) == 1
    assert residue(-1, 5) == 4


def test_gmd_neighbourhoods_follow_definition():
    G = build_gmd(5, 3)
    assert G.neighbors(a(4)) == {b(4), b(5), b(1)}
    assert G.neighbors(b(2)) == {a(2), a(1), a(5)}


@pytest.mark.parametrize("m", range(1, 17))
def test_gmd_is_d_regular(m):
    for d in range(1, m + 1):
        assert set(build_gmd(m, d).degrees()) == {d}


@pytest.mark.parametrize("m,d", [(m, d) for m in range(1, 9) for d in range(1, m + 1)])
def test_b_neighbourhood_formula(m, d):
    G = build_gmd(m, d)
    for i in range(1, m + 1):
        assert G.neighbors(b(i)) == {a(residue(i - k, m)) for k in range(d)}


def test_canonical_order():
    G = build_gmd(3, 2)
    assert [str(v) for v in G.vertices] == ["a1", "a2", "a3", "b1", "b2", "b3"]


@pytest.mark.parametrize("m,d", [(0, 1), (3, 0), (3, 4)])
def test_gmd_rejects_bad_parameters(m, d):
    with pytest.raises(ValueError):
        build_gmd(m, d)


def test_cycle():
    assert len(build_cycle(3).edges()) == 3
    assert build_cycle(4).degrees() == [2, 2, 2, 2]
    with pytest.raises(ValueError):
        build_cycle(2)


def test_complete_bipartite():
    assert len(build_complete_bipartite(1, 1).edges()) == 1
    assert are_isomorphic(build_complete_bipartite(2, 2), build_cycle(4))
    assert len(build_complete_bipartite(3, 4).edges()) == 12
    with pytest.raises(ValueError):
        build_complete_bipartite(0, 2)


@pytest.mark.parametrize("m", range(1, 7))
def test_gmd_full_degree_is_complete_bipartite(m):
    assert are_isomorphic(build_gmd(m, m), build_complete_bipartite(m, m))


def test_gmd_5_5_is_k55():
    G = build_gmd(5, 5)
    assert len(G.edges()) == 25
    assert all(G.adjacent(a(i), b(j)) for i in range(1, 6) for j in range(1, 6))


def test_product_k2_k2_two_disjoint_edges():
    P = categorical_product(build_complete(2), build_complete(2))
    assert P.n == 4
    assert len(P.edges()) == 2
    assert set(P.degrees()) == {1}


def test_product_k2_k3_is_c6():
    assert are_isomorphic(categorical_product(build_complete(2), build_complete(3)), build_cycle(6))


@pytest.mark.parametrize("G,H", [(build_cycle(4), build_complete(3)), (build_gmd(3, 2), build_cycle(5))])
def test_product_degree_multiplies(G, H):
    P = categorical_product(G, H)
    for g in G.vertices:
        for h in H.vertices:
            assert P.degree((g, h)) == G.degree(g) * H.degree(h)


def test_gmd_4_3_is_k2_times_k4():
    assert are_isomorphic(build_gmd(4, 3), categorical_product(build_complete(2), build_complete(4)))


def test_isomorphism_examples():
    assert are_isomorphic(build_gmd(3, 2), build_cycle(6))
    assert not are_isomorphic(build_cycle(6), build_complete_bipartite(3, 3))


def test_isomorphism_size_bound():
    with pytest.raises(ValueError):
        are_isomorphic(build_cycle(17), build_cycle(17))


@pytest.mark.parametrize(
    "G,H",
    [
        (build_gmd(4, 2), build_cycle(8)),
        (build_gmd(5, 2), build_gmd(5, 3)),
        (build_gmd(6, 3), build_complete_bipartite(6, 3)),
        (build_cycle(8), categorical_product(build_complete(2), build_cycle(4))),
        (build_gmd(6, 2), categorical_product(build_complete(2), build_cycle(6))),
        (build_gmd(4, 1), categorical_product(build_complete(2), build_complete(2))),
        (build_gmd(6, 3), categorical_product(build_complete(2), build_complete(3))),
    ],
)
def test_isomorphism_agrees_with_networkx(G, H):
    expected = G.n == H.n and nx.is_isomorphic(to_nx(G), to_nx(H))
    assert are_isomorphic(G, H) == expected


def test_edge_relation_symmetric_irreflexive():
    for G in [build_gmd(7, 3), build_cycle(9), categorical_product(build_cycle(3), build_complete(3))]:
        for i, row in enumerate(G.adjacency):
            assert not row >> i & 1
            for j in range(G.n):
                assert (row >> j & 1) == (G.adjacency[j] >> i & 1)


def test_graph_rejects_asymmetric_adjacency():
    with pytest.raises(ValueError):
        Graph((1, 2), (0b10, 0))
    with pytest.raises(ValueError):
        Graph.from_edges([1], [(1, 1)])


def test_json_round_trip():
    G = build_gmd(4, 2)
    data = G.to_json()
    assert data["family"] == "gmd" and data["m"] == 4 and data["d"] == 2
    assert data["vertices"][:2] == ["a1", "a2"]
    assert ["a1", "b2"] in data["edges"]
    H = graph_from_json(json.dumps(data))
    assert are_isomorphic(G, H)
    assert H.family == "gmd" and H.params == {"m": 4, "d": 2}


def test_dot_export():
    dot = build_gmd(2, 1).to_dot()
    assert dot.startswith("graph gmd {")
    assert '"a1" -- "b1";' in dot
