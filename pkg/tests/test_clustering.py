import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.cluster.hierarchy import linkage as scipy_linkage
from scipy.spatial.distance import squareform

from models import DistanceMode, Linkage
from similarity import SimilarityMatrix
from clustering import (
    DistanceMatrix,
    agglomerate,
    cut,
    dendrogram_to_dict,
    similarity_to_distance,
    to_linkage_matrix,
)
from exceptions import ClusteringError, CutRangeError


def distances(values, entities=None):
    values = np.asarray(values, dtype=float)
    return DistanceMatrix(entities=tuple(entities or range(1, len(values) + 1)), values=values)


def test_identical_rows_have_zero_row_euclidean_distance():
    s = SimilarityMatrix(entities=(1, 2, 3), values=np.array([[1, 1, 0], [1, 1, 0], [0, 0.5, 1]], dtype=float))
    d = similarity_to_distance(s, DistanceMode.ROW_EUCLIDEAN).values
    assert d[0, 1] == 0.0
    np.testing.assert_allclose(d, d.T)


def test_one_minus_sym_all_ones():
    s = SimilarityMatrix(entities=(1, 2), values=np.ones((2, 2)))
    np.testing.assert_array_equal(similarity_to_distance(s, DistanceMode.ONE_MINUS_SYM).values, np.zeros((2, 2)))


def test_one_minus_sym_averages_asymmetric_values():
    s = SimilarityMatrix(entities=(1, 2), values=np.array([[1.0, 0.5], [0.1, 1.0]]))
    d = similarity_to_distance(s, DistanceMode.ONE_MINUS_SYM).values
    assert d[0, 1] == pytest.approx(0.7)
    assert d[1, 0] == pytest.approx(0.7)
    assert d[0, 0] == 0.0


def test_two_entities_merge_once():
    dg = agglomerate(distances([[0, 0.7], [0.7, 0]]))
    assert dg.merges == ((0, 1, 0.7),)


def test_average_linkage_three_entities():
    dg = agglomerate(distances([[0, 0.1, 1.0], [0.1, 0, 1.0], [1.0, 1.0, 0]]), Linkage.AVERAGE)
    assert dg.merges[0] == (0, 1, 0.1)
    assert set(dg.merges[1][:2]) == {2, 3}
    assert dg.merges[1][2] == pytest.approx(1.0)
    assert cut(dg, 2).as_partition() == {frozenset({1, 2}), frozenset({3})}


def test_equidistant_tie_breaks_on_first_pair():
    dg = agglomerate(distances(np.full((3, 3), 0.5) - np.eye(3) * 0.5))
    assert dg.merges[0][:2] == (0, 1)


def test_single_entity_has_no_merges():
    dg = agglomerate(distances([[0.0]], entities=[9]))
    assert dg.merges == ()
    assert cut(dg, 1).clusters == {"c0": frozenset({9})}


def test_empty_entity_set():
    with pytest.raises(ClusteringError):
        agglomerate(DistanceMatrix(entities=(), values=np.zeros((0, 0))))


def test_cut_extremes_and_names():
    dg = agglomerate(distances([[0, 0.1, 1.0], [0.1, 0, 1.0], [1.0, 1.0, 0]], entities=[30, 10, 20]))
    assert cut(dg, 1).clusters == {"c0": frozenset({10, 20, 30})}
    singletons = cut(dg, 3)
    # named by leaf index, not by entity id
    assert singletons.clusters == {"c0": frozenset({30}), "c1": frozenset({10}), "c2": frozenset({20})}


@pytest.mark.parametrize("n", [0, 4])
def test_cut_out_of_range(n):
    dg = agglomerate(distances(np.ones((3, 3)) - np.eye(3)))
    with pytest.raises(CutRangeError):
        cut(dg, n)


def test_dendrogram_dump_rounds_heights():
    dg = agglomerate(distances([[0, 1 / 3], [1 / 3, 0]]))
    assert dendrogram_to_dict(dg) == {"leaves": [1, 2], "merges": [[0, 1, 0.333333333]]}


condensed = st.integers(2, 8).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.floats(0.01, 10), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2, unique=True),
))


@settings(max_examples=60)
@given(condensed, st.sampled_from([Linkage.AVERAGE, Linkage.SINGLE, Linkage.COMPLETE]))
def test_matches_scipy_without_ties(data, method):
    n, values = data
    d = squareform(np.asarray(values))
    ours = to_linkage_matrix(agglomerate(distances(d), method))
    reference = scipy_linkage(np.asarray(values), method=method.value.lower())
    np.testing.assert_allclose(ours[:, 2], reference[:, 2], rtol=1e-9)
    for k in range(1, n + 1):
        ours_cut = cut(agglomerate(distances(d), method), k).as_partition()
        assert len(ours_cut) == k


@settings(max_examples=60)
@given(condensed, st.sampled_from([Linkage.AVERAGE, Linkage.COMPLETE]))
def test_cuts_partition_nest_and_heights_are_monotone(data, method):
    n, values = data
    dg = agglomerate(distances(squareform(np.asarray(values))), method)
    assert len(dg.merges) == n - 1
    assert all(b >= a for a, b in zip(dg.heights, dg.heights[1:]))
    used = [node for left, right, _ in dg.merges for node in (left, right)]
    assert sorted(used) == list(range(2 * n - 2))

    previous = None
    for k in range(1, n + 1):
        partition = cut(dg, k).as_partition()
        assert len(partition) == k
        assert frozenset().union(*partition) == frozenset(range(1, n + 1))
        if previous is not None:
            for cluster in previous:
                assert cluster == frozenset().union(*[c for c in partition if c <= cluster])
        previous = partition


@settings(max_examples=40)
@given(condensed, st.randoms(use_true_random=False))
def test_permutation_invariance_without_ties(data, rnd):
    n, values = data
    d = squareform(np.asarray(values))
    order = list(range(n))
    rnd.shuffle(order)
    permuted = d[np.ix_(order, order)]
    entities = [i + 1 for i in order]
    for k in range(1, n + 1):
        original = cut(agglomerate(distances(d)), k).as_partition()
        shuffled = cut(agglomerate(distances(permuted, entities=entities)), k).as_partition()
        assert original == shuffled
