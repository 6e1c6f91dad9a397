import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import EXAMPLE_MATRIX
from fcm_effects.errors import (
    ConceptOutOfRange,
    DuplicateEdge,
    InvalidEdge,
    NonSquareMatrix,
    NonzeroDiagonal,
    TooFewConcepts,
    WeightOutOfRange,
)
from fcm_effects.graph import Edge, FcmGraph, density, from_dense_matrix, sorted_edges, to_dense_matrix

WEIGHTS = st.one_of(
    st.sampled_from([-1.0, -0.5, 0.25, 0.5, 1.0]),
    st.floats(min_value=-1.0, max_value=1.0, allow_nan=False).filter(lambda w: w != 0),
)


@st.composite
def fcm_graphs(draw, max_n=7):
    n = draw(st.integers(min_value=2, max_value=max_n))
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    weights = draw(st.lists(WEIGHTS, min_size=len(chosen), max_size=len(chosen)))
    return FcmGraph.from_edges(n, [(s, t, w) for (s, t), w in zip(chosen, weights)])


def test_example_map_matrix_builds_six_edges(example_map):
    assert example_map.n == 4
    assert example_map.e == 6
    assert example_map.out_adjacency[1] == ((0, 0.68), (3, -0.7))


def test_zero_matrix_is_empty_graph():
    g = from_dense_matrix(np.zeros((3, 3)))
    assert g.n == 3 and g.e == 0
    assert g.edges == ()


def test_out_of_range_weight_names_the_cell():
    m = np.zeros((3, 3))
    m[1, 2] = 1.5
    with pytest.raises(WeightOutOfRange) as exc:
        from_dense_matrix(m)
    assert (exc.value.i, exc.value.j, exc.value.value) == (1, 2, 1.5)


def test_nan_weight_is_out_of_range():
    m = np.zeros((2, 2))
    m[0, 1] = np.nan
    with pytest.raises(WeightOutOfRange):
        from_dense_matrix(m)


def test_nonzero_diagonal_names_the_concept():
    m = np.zeros((3, 3))
    m[2, 2] = 0.3
    with pytest.raises(NonzeroDiagonal) as exc:
        from_dense_matrix(m)
    assert exc.value.i == 2


def test_non_square_rejected():
    with pytest.raises(NonSquareMatrix):
        from_dense_matrix(np.zeros((2, 3)))
    with pytest.raises(NonSquareMatrix):
        from_dense_matrix(np.zeros(4))


def test_from_edges_validation():
    with pytest.raises(ConceptOutOfRange):
        FcmGraph.from_edges(2, [(0, 2, 0.5)])
    with pytest.raises(NonzeroDiagonal):
        FcmGraph.from_edges(2, [(1, 1, 0.5)])
    with pytest.raises(InvalidEdge):
        FcmGraph.from_edges(2, [(0, 1, 0.0)])
    with pytest.raises(DuplicateEdge):
        FcmGraph.from_edges(2, [(0, 1, 0.5), (0, 1, 0.25)])
    with pytest.raises(WeightOutOfRange):
        FcmGraph.from_edges(2, [(0, 1, -1.01)])


def test_sorted_edges_example_map(example_map):
    se = sorted_edges(example_map)
    assert list(se.weights) == [0.68, 0.60, 0.36, 0.15, -0.25, -0.70]
    assert se[0] == (1, 0, 0.68)
    assert se.weight_at(2) == 0.6
    assert se.ranks[(3, 2)] == 3


def test_sorted_edges_empty():
    assert len(sorted_edges(FcmGraph.from_edges(3, []))) == 0


def test_sorted_edges_tie_break_by_source_then_target():
    g = FcmGraph.from_edges(3, [(0, 2, 0.5), (1, 0, 0.5), (0, 1, 0.5)])
    assert sorted_edges(g).entries == [(0, 1, 0.5), (0, 2, 0.5), (1, 0, 0.5)]


def test_density():
    g = FcmGraph.from_dense_matrix(EXAMPLE_MATRIX)
    assert density(g) == 0.5
    full = FcmGraph.from_dense_matrix(np.full((10, 10), 0.5) - np.diag(np.full(10, 0.5)))
    assert density(full) == 1.0
    assert density(FcmGraph.from_edges(10, [])) == 0.0
    with pytest.raises(TooFewConcepts):
        density(FcmGraph.from_edges(1, []))


def test_sign_counts(example_map):
    assert example_map.sign_counts() == {"positive": 4, "negative": 2, "zero": 6}


def test_labels_do_not_affect_equality(example_map):
    labelled = example_map.with_labels(["a", "b", "c", "d"])
    assert labelled == example_map
    assert labelled.label(2) == "c"
    assert example_map.label(2) == "C2"


def test_edge_arrays_are_read_only(example_map):
    sources, _, _ = example_map.edge_arrays
    with pytest.raises(ValueError):
        sources[0] = 3


@settings(max_examples=100, deadline=None, derandomize=True)
@given(fcm_graphs())
def test_dense_matrix_round_trip(g):
    assert from_dense_matrix(to_dense_matrix(g)) == g


@settings(max_examples=100, deadline=None, derandomize=True)
@given(fcm_graphs())
def test_sorted_edges_total_order_and_permutation(g):
    entries = sorted_edges(g).entries
    keys = [(-w, s, t) for s, t, w in entries]
    assert keys == sorted(keys)
    assert sorted(Edge(s, t, w) for s, t, w in entries) == sorted(g.edges)
    assert sorted_edges(FcmGraph.from_edges(g.n, reversed(g.edges))).entries == entries
