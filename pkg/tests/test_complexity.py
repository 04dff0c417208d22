import pytest
from hypothesis import given, settings, strategies as st

from models import Access, AccessMode, TraceAggregation
from complexity import (
    ComplexityCalculator,
    LocalTransaction,
    functionality_complexity,
    is_distributed,
    max_complexity,
    partition_trace,
    prune,
    system_complexity,
)
from exceptions import UnassignedEntityError
from tests.conftest import decomposition, make_monolith, monoliths, partitions
from tests.oracles import oracle_complexities

R, W = AccessMode.READ, AccessMode.WRITE


def lt(*pairs):
    return LocalTransaction("f", 0, "c0", tuple(Access(entity=e, mode=m) for e, m in pairs))


def trace_of(m, name):
    return m.functionalities[name].traces[0]


def test_partition_two_clusters(two_entity_system):
    p = partition_trace(trace_of(two_entity_system, "f1"), decomposition({1}, {2}))
    assert len(p.local_transactions) == 2
    assert len(p.remote_invocations) == 1


def test_partition_single_cluster(running_example):
    p = partition_trace(trace_of(running_example, "f1"), decomposition({1, 2, 3}))
    assert len(p.local_transactions) == 1
    assert p.remote_invocations == ()


def test_partition_returning_to_a_cluster():
    m = make_monolith({"f": [[(1, "R"), (2, "W"), (1, "W")]]})
    p = partition_trace(trace_of(m, "f"), decomposition({1}, {2}))
    assert [t.cluster for t in p.local_transactions] == ["c0", "c1", "c0"]


def test_partition_unassigned_entity(running_example):
    with pytest.raises(UnassignedEntityError) as exc:
        partition_trace(trace_of(running_example, "f2"), decomposition({1, 2}))
    assert exc.value.code == "UNASSIGNED_ENTITY"
    assert exc.value.context["entities"] == [3]


@pytest.mark.parametrize("pairs, expected", [
    ([(1, R), (1, R)], {(1, R)}),
    ([(1, R), (1, W)], {(1, R), (1, W)}),
    ([(1, W), (1, R)], {(1, W)}),
    ([(1, W), (2, R), (1, R), (2, W)], {(1, W), (2, R), (2, W)}),
])
def test_prune(pairs, expected):
    assert prune(lt(*pairs)) == {Access(entity=e, mode=m) for e, m in expected}


def test_is_distributed(two_entity_system):
    singletons = decomposition({1}, {2})
    assert is_distributed(two_entity_system.functionalities["f1"], singletons)
    assert not is_distributed(two_entity_system.functionalities["f1"], decomposition({1, 2}))
    single_access = make_monolith({"f": [[(1, "R")], [(2, "W")]]})
    assert not is_distributed(single_access.functionalities["f"], singletons)


def test_two_entity_system_complexities(two_entity_system):
    d = decomposition({1}, {2})
    m = two_entity_system
    assert functionality_complexity(m.functionalities["f1"], d, m) == 2
    assert functionality_complexity(m.functionalities["f2"], d, m) == 2
    report = system_complexity(m, d)
    assert report.total == 4
    assert report.max_complexity == 4
    assert report.uniform == 1.0


def test_single_cluster_scores_zero(two_entity_system):
    report = system_complexity(two_entity_system, decomposition({1, 2}))
    assert report.total == 0
    assert report.uniform == 0.0
    assert all(v == 0 for v in report.per_functionality.values())


def test_unshared_entities_score_zero():
    m = make_monolith({"f": [[(1, "W"), (2, "R")]], "g": [[(3, "W"), (4, "R")]]})
    for d in (decomposition({1}, {2}, {3}, {4}), decomposition({1, 3}, {2, 4})):
        assert system_complexity(m, d).total == 0


def test_single_access_traces_have_zero_max_complexity():
    m = make_monolith({"f": [[(1, "W")]], "g": [[(1, "R")]]})
    assert max_complexity(m) == 0
    assert system_complexity(m, decomposition({1})).uniform == 0.0


def test_running_example_matches_oracle(running_example):
    singletons = {1: "a", 2: "b", 3: "c"}
    assert max_complexity(running_example) == sum(oracle_complexities(running_example, singletons).values())


def test_strict_summation_scores_unsplit_traces():
    # f is local under this decomposition but still reads what distributed g writes
    m = make_monolith({"f": [[(1, "R"), (2, "R")]], "g": [[(1, "W"), (3, "W")]]})
    d = decomposition({1, 2}, {3})
    assert ComplexityCalculator(m).functionality_complexity("f", d) == 0
    assert ComplexityCalculator(m, strict_summation=True).functionality_complexity("f", d) == 1


def test_mean_and_max_aggregation():
    m = make_monolith({
        "f": [[(1, "W"), (2, "W")], [(1, "W")]],
        "g": [[(2, "R"), (1, "R")]],
    })
    d = decomposition({1}, {2})
    assert ComplexityCalculator(m).functionality_complexity("f", d) == 1.0
    assert ComplexityCalculator(m, aggregation=TraceAggregation.MAX).functionality_complexity("f", d) == 2.0


def test_uniform_above_one_is_a_finding_not_clamped(two_entity_system):
    calculator = ComplexityCalculator(two_entity_system)
    calculator._max_complexity = 2.0
    report = calculator.system_complexity(decomposition({1}, {2}))
    assert report.uniform == 2.0
    assert len(report.findings) == 1


def test_singletons_score_exactly_one(two_entity_system):
    report = ComplexityCalculator(two_entity_system).system_complexity(decomposition({1}, {2}))
    assert report.uniform == 1.0
    assert report.findings == []


def test_max_complexity_is_cached(two_entity_system, mocker):
    calculator = ComplexityCalculator(two_entity_system)
    spy = mocker.spy(calculator, "_score")
    assert calculator.max_complexity == 4
    assert calculator.max_complexity == 4
    assert spy.call_count == 1


@settings(max_examples=500, deadline=None)
@given(st.data())
def test_matches_brute_force_oracle(data):
    m = data.draw(monoliths(max_entities=6, max_functionalities=5, max_accesses=8))
    calculator = ComplexityCalculator(m)
    for _ in range(5):
        d = data.draw(partitions(m.entities))
        expected = oracle_complexities(m, d.assignment)
        report = calculator.system_complexity(d)
        assert report.per_functionality == expected
        assert report.total == sum(expected[name] for name in report.per_functionality)


@settings(max_examples=80, deadline=None)
@given(monoliths())
def test_extremes_of_uniform_complexity(m):
    calculator = ComplexityCalculator(m)
    single = decomposition(set(m.entities))
    singletons = calculator.singleton_decomposition()
    assert calculator.system_complexity(single).uniform == 0.0
    expected = 1.0 if calculator.max_complexity > 0 else 0.0
    assert calculator.system_complexity(singletons).uniform == expected


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_partition_invariants(data):
    m = data.draw(monoliths())
    d = data.draw(partitions(m.entities))
    for functionality in m.functionalities.values():
        for trace in functionality.traces:
            p = partition_trace(trace, d)
            flattened = [a for t in p.local_transactions for a in t.accesses]
            assert tuple(flattened) == trace.accesses
            assert len(p.remote_invocations) == len(p.local_transactions) - 1
            clusters = [t.cluster for t in p.local_transactions]
            assert all(a != b for a, b in zip(clusters, clusters[1:]))
            for t in p.local_transactions:
                assert len(prune(t)) <= 2 * len({a.entity for a in t.accesses})


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_duplicating_every_trace_keeps_complexity(data):
    m = data.draw(monoliths())
    d = data.draw(partitions(m.entities))
    doubled = m.model_copy(update={"functionalities": {
        name: f.model_copy(update={
            "traces": f.traces + tuple(t.model_copy(update={"id": t.id + 100}) for t in f.traces)
        })
        for name, f in m.functionalities.items()
    }})
    before = ComplexityCalculator(m).system_complexity(d)
    after = ComplexityCalculator(doubled).system_complexity(d)
    assert after.per_functionality == pytest.approx(before.per_functionality)
    assert after.uniform == pytest.approx(before.uniform)
