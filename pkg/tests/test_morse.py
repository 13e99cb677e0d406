import random

import pytest

from morsekit.complex import Complex, independence_complex
from morsekit.errors import NotAcyclicError
from morsekit.graphs import Graph, build_cycle, build_gmd
from morsekit.homology import reduced_homology
from morsekit.homotopy import HomotopyPrediction
from morsekit.morse import (
    MorseMatching,
    infer_wedge,
    morse_chain_complex,
    partial_matching_violation,
    replay_trace,
    sequential_element_matching,
    verify_acyclic,
    verify_partial_matching,
)

from oracles import b_indices, modified_hasse_is_acyclic, naive_matching

SMALL = [(m, d) for m in range(1, 8) for d in range(1, m + 1)]


def edge_complex():
    return independence_complex(Graph.from_edges(["a", "b"], [("a", "b")]))


def triangle_boundary():
    return Complex(Graph((1, 2, 3), (0, 0, 0)), [0, 1, 2, 4, 3, 6, 5])


def test_single_edge_matching():
    c = edge_complex()
    mm = sequential_element_matching(c, ["a", "b"])
    assert mm.pairs == {0: 0b01}
    assert mm.critical == (0b10,)


def test_g32_critical_cells():
    c = independence_complex(build_gmd(3, 2))
    mm = sequential_element_matching(c)
    assert {b_indices(c, f) for f in mm.critical} == {frozenset({1, 2}), frozenset({1, 3})}


def test_g42_critical_cells():
    c = independence_complex(build_gmd(4, 2))
    mm = sequential_element_matching(c)
    assert [c.labels(f) for f in mm.critical] == [["b1", "b3", "b4"]]


def test_empty_face_pairs_with_first_vertex():
    c = independence_complex(build_gmd(5, 2))
    mm = sequential_element_matching(c)
    assert mm.pairs[0] == 1
    assert mm.phase[0] == (0, "down")


@pytest.mark.parametrize("m,d", SMALL)
def test_matches_naive_simulation(m, d):
    c = independence_complex(build_gmd(m, d))
    mm = sequential_element_matching(c)
    for seed in (0, 1):
        pairs, residual = naive_matching(c.faces, range(c.graph.n), seed)
        assert pairs == mm.pairs
        assert residual == set(mm.critical)


@pytest.mark.parametrize("seed", range(5))
def test_nonstandard_orders_match_naive(seed):
    c = independence_complex(build_cycle(9))
    order = list(c.graph.vertices)
    random.Random(seed).shuffle(order)
    mm = sequential_element_matching(c, order)
    pairs, _ = naive_matching(c.faces, [c.graph.index(v) for v in order], seed)
    assert pairs == mm.pairs
    assert verify_acyclic(mm, c)


@pytest.mark.parametrize("m,d", SMALL)
def test_counts_and_trace(m, d):
    c = independence_complex(build_gmd(m, d))
    mm = sequential_element_matching(c)
    assert len(mm.critical) + 2 * len(mm.pairs) == len(c)
    assert replay_trace(mm) == mm.pairs
    for lo, hi in mm.pairs.items():
        x = mm.phase[lo][0]
        assert hi == lo | (1 << x) and not lo >> x & 1
        assert mm.phase[hi] == (x, "up")


def test_order_must_be_permutation():
    c = independence_complex(build_gmd(3, 1))
    vs = list(c.graph.vertices)
    with pytest.raises(ValueError):
        sequential_element_matching(c, vs[:-1])
    with pytest.raises(ValueError):
        sequential_element_matching(c, vs[:-1] + vs[:1])
    with pytest.raises(ValueError):
        sequential_element_matching(c, vs[:-1] + ["zz"])


def test_partial_matching_checks():
    c = independence_complex(build_gmd(5, 3))
    assert verify_partial_matching(sequential_element_matching(c), c)
    assert verify_partial_matching(MorseMatching.from_pairs(c, {}), c)
    a1 = c.face_from_labels(["a1"])
    a1b3 = c.graph.mask([c.graph.vertices[0], c.graph.vertices[7]])
    assert a1b3 not in c
    bad = MorseMatching.from_pairs(c, {a1: a1b3})
    assert not verify_partial_matching(bad, c)
    assert "not a face" in partial_matching_violation(bad, c)
    a2 = c.face_from_labels(["a2"])
    a1a2 = a1 | a2
    twice = MorseMatching.from_pairs(c, {a1: a1a2, a2: a1a2})
    assert "two pairs" in partial_matching_violation(twice, c)
    skip = MorseMatching.from_pairs(c, {0: a1a2})
    assert "cover" in partial_matching_violation(skip, c)


@pytest.mark.parametrize("m,d", [(m, d) for m in range(1, 11) for d in range(1, m + 1)])
def test_acyclic_on_all_small_instances(m, d):
    c = independence_complex(build_gmd(m, d))
    assert verify_acyclic(sequential_element_matching(c), c)


def test_triangle_cyclic_matching():
    c = triangle_boundary()
    mm = MorseMatching.from_pairs(c, {1: 0b011, 2: 0b110, 4: 0b101})
    assert verify_partial_matching(mm, c)
    assert not verify_acyclic(mm, c)
    assert not modified_hasse_is_acyclic(c.faces, mm.pairs)
    with pytest.raises(NotAcyclicError):
        morse_chain_complex(c, mm)


def test_empty_matching_is_acyclic():
    c = triangle_boundary()
    assert verify_acyclic(MorseMatching.from_pairs(c, {}), c)


@pytest.mark.parametrize("m,d", SMALL)
def test_acyclicity_agrees_with_networkx(m, d):
    c = independence_complex(build_gmd(m, d))
    mm = sequential_element_matching(c)
    assert modified_hasse_is_acyclic(c.faces, mm.pairs) is True


def test_acyclicity_detects_larger_cycles():
    c = independence_complex(build_cycle(6))
    mm = sequential_element_matching(c, list(reversed(c.graph.vertices)))
    assert verify_acyclic(mm, c)
    edges = c.faces_of_dim(1)
    # 1, 3, 5 span a hollow triangle inside Ind(C_6); pair vertices around it
    v = {i: 1 << (i - 1) for i in range(1, 7)}
    pairs = {v[1]: v[1] | v[3], v[3]: v[3] | v[5], v[5]: v[5] | v[1]}
    assert all(p in edges for p in pairs.values())
    mm = MorseMatching.from_pairs(c, pairs)
    assert verify_partial_matching(mm, c)
    assert verify_acyclic(mm, c) == modified_hasse_is_acyclic(c.faces, pairs) is False


def test_morse_complex_single_dimension_is_zero():
    c = independence_complex(build_gmd(3, 2))
    mc = morse_chain_complex(c, sequential_element_matching(c))
    assert mc.cells[1] and all(B.is_zero() for B in mc.boundaries.values())
    assert reduced_homology(mc).betti == {1: 2}


def test_morse_complex_g42():
    c = independence_complex(build_gmd(4, 2))
    mc = morse_chain_complex(c, sequential_element_matching(c))
    assert reduced_homology(mc).betti == {2: 1}


@pytest.mark.parametrize("seed", range(6))
def test_morse_homology_other_orders(seed):
    # random orders give critical cells in several dimensions: real boundaries
    for G in (build_gmd(6, 2), build_gmd(7, 3), build_cycle(11)):
        c = independence_complex(G)
        order = list(G.vertices)
        random.Random(seed).shuffle(order)
        mm = sequential_element_matching(c, order)
        mc = morse_chain_complex(c, mm)
        for p in mc.boundaries:
            if p + 1 in mc.boundaries:
                assert (mc.boundary(p) @ mc.boundary(p + 1)).is_zero()
        assert reduced_homology(mc) == reduced_homology(c)


def test_morse_boundary_nonzero_somewhere():
    found = False
    for seed in range(30):
        c = independence_complex(build_gmd(6, 3))
        order = list(c.graph.vertices)
        random.Random(seed).shuffle(order)
        mc = morse_chain_complex(c, sequential_element_matching(c, order))
        if any(not B.is_zero() for B in mc.boundaries.values()):
            found = True
            assert reduced_homology(mc) == reduced_homology(c)
    assert found


def test_infer_wedge():
    c = independence_complex(build_cycle(6))
    mm = sequential_element_matching(c)
    assert infer_wedge(mm) == HomotopyPrediction.wedge(1, 2)
    assert str(infer_wedge(mm)) == "S^1 v S^1"
    c = independence_complex(build_gmd(5, 5))
    assert infer_wedge(sequential_element_matching(c)) == HomotopyPrediction.wedge(0, 1)


def test_infer_wedge_indeterminate_and_errors():
    c = triangle_boundary()
    mixed = MorseMatching(pairs={0: 1}, phase={}, critical=(2, 4, 6))
    assert infer_wedge(mixed) is None
    with pytest.raises(ValueError):
        infer_wedge(MorseMatching.from_pairs(c, {}))
    assert infer_wedge(MorseMatching(pairs={}, phase={}, critical=())) == HomotopyPrediction()
