import json

import pytest
from hypothesis import given, strategies as st

from models import Decomposition, SweepRecord, Weights
from monolith import (
    assert_partition,
    best_decompositions_to_dict,
    common_subset,
    compare_coverage,
    parse_best_decompositions_file,
    parse_decomposition_file,
    restrict_monolith,
    serialize_decomposition,
)
from exceptions import PartitionError, SchemaError, UnknownReferenceError
from tests.conftest import decomposition, make_monolith, monoliths


def test_restrict_to_everything_is_identity(running_example):
    m = running_example
    assert restrict_monolith(m, set(m.functionalities), set(m.entities)) == m


def test_restrict_preserves_order_of_remaining_accesses():
    m = make_monolith({"f": [[(1, "R"), (2, "W"), (1, "W")]]})
    restricted = restrict_monolith(m, {"f"}, {1})
    assert [(a.entity, a.mode.value) for a in restricted.functionalities["f"].traces[0].accesses] == [
        (1, "R"), (1, "W")
    ]
    assert restricted.entities == {1: None}


def test_restrict_drops_emptied_functionality_with_finding():
    m = make_monolith({"f": [[(1, "R")]], "g": [[(2, "W")]]})
    findings = []
    restricted = restrict_monolith(m, {"f", "g"}, {1}, findings)
    assert list(restricted.functionalities) == ["f"]
    assert len(findings) == 1 and "'g'" in findings[0]


def test_restrict_drops_emptied_traces_only():
    m = make_monolith({"f": [[(2, "R")], [(1, "W"), (2, "R")]]})
    restricted = restrict_monolith(m, {"f"}, {1})
    traces = restricted.functionalities["f"].traces
    assert [t.id for t in traces] == [1]


def test_restrict_unknown_reference(running_example):
    with pytest.raises(UnknownReferenceError) as exc:
        restrict_monolith(running_example, {"f1", "nope"}, {1, 99})
    assert exc.value.context == {"functionalities": ["nope"], "entities": [99]}


@given(monoliths(), st.data())
def test_restrict_is_idempotent(m, data):
    names = data.draw(st.sets(st.sampled_from(sorted(m.functionalities))))
    entities = data.draw(st.sets(st.sampled_from(sorted(m.entities))))
    once = restrict_monolith(m, names, entities)
    twice = restrict_monolith(once, set(once.functionalities) & names, set(once.entities) & entities)
    assert once == twice


def test_common_subset_of_identical_monoliths(running_example):
    names, entities = common_subset(running_example, running_example)
    assert names == frozenset(running_example.functionalities)
    assert entities == frozenset(running_example.entities)


def test_common_subset_intersects_names():
    a = make_monolith({"f1": [[(1, "R")]], "f2": [[(1, "R")]]})
    b = make_monolith({"f2": [[(1, "R")]], "f3": [[(1, "R")]]})
    names, _ = common_subset(a, b)
    assert names == {"f2"}


def test_common_subset_disjoint_names():
    a = make_monolith({"f1": [[(1, "R")]]})
    b = make_monolith({"g1": [[(1, "R")]]})
    assert common_subset(a, b)[0] == frozenset()


def test_common_subset_matches_entities_by_name():
    a = make_monolith({"f": [[(1, "R"), (2, "R")]]}, entities={1: "Book", 2: "Author"})
    b = make_monolith({"f": [[(7, "R"), (2, "R")]]}, entities={7: "Book", 2: "Reader"})
    _, entities = common_subset(a, b)
    assert entities == {1}


def test_coverage_of_partial_collection():
    static = make_monolith({
        "f1": [[(1, "R"), (2, "W")]],
        "f2": [[(3, "R")]],
    })
    dynamic = make_monolith({"f1": [[(1, "R")]]})
    report = compare_coverage(static, dynamic)
    assert report.functionalities_covered_pct == 50.0
    assert report.entities_covered_pct == pytest.approx(33.33)
    assert report.avg_entities_per_functionality_pct == 50.0


def test_assert_partition_names_missing_and_foreign():
    with pytest.raises(PartitionError) as exc:
        assert_partition(decomposition({1, 2}, {5}), {1, 2, 3})
    assert exc.value.context == {"missing": [3], "foreign": [5]}


def test_decomposition_file_round_trip(tmp_path):
    d = decomposition({1, 3}, {2}, {10})
    path = tmp_path / "d.json"
    path.write_text(serialize_decomposition(d))
    assert parse_decomposition_file(path) == d


def test_decomposition_file_rejects_overlap(tmp_path):
    path = tmp_path / "d.json"
    path.write_text(json.dumps({"clusters": {"a": [1, 2], "b": [2]}}))
    with pytest.raises(SchemaError):
        parse_decomposition_file(path)


def test_decomposition_requires_disjoint_clusters():
    with pytest.raises(ValueError):
        Decomposition(clusters={"a": frozenset({1}), "b": frozenset({1})})


def test_best_decompositions_file_reads_back_per_cluster_count(tmp_path):
    best = {
        2: SweepRecord(weights=Weights.from_tuple((100, 0, 0, 0)), n_clusters=2,
                       uniform_complexity=0.0, decomposition=decomposition({1, 2}, {3})),
        10: SweepRecord(weights=Weights.from_tuple((0, 0, 0, 100)), n_clusters=10,
                        uniform_complexity=0.5, decomposition=decomposition(*({e} for e in range(1, 11)))),
    }
    path = tmp_path / "best.json"
    path.write_text(json.dumps(best_decompositions_to_dict(best)))
    parsed = parse_best_decompositions_file(path)
    assert list(parsed) == [2, 10]
    assert parsed[2] == best[2].decomposition
    assert parsed[10].same_partition(best[10].decomposition)


@pytest.mark.parametrize("content", [
    {"clusters": {"a": [1, 2]}},
    {},
    {"2": {"weights": [100, 0, 0, 0]}},
    [1, 2],
])
def test_best_decompositions_file_rejects_other_shapes(tmp_path, content):
    path = tmp_path / "best.json"
    path.write_text(json.dumps(content))
    with pytest.raises(SchemaError):
        parse_best_decompositions_file(path)
