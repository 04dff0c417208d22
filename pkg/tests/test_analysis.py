import pytest

from models import SweepRecord, Weights
from analysis import (
    DecompositionSweep,
    SWEEP_COLUMNS,
    best_per_n,
    enumerate_weightings,
    records_to_frame,
    sweep,
    write_sweep_csv,
)
from exceptions import AnalysisError, SweepError
from tests.conftest import make_monolith


@pytest.mark.parametrize("step, count", [(10, 286), (25, 35), (50, 10), (100, 4), (5, 1771)])
def test_weighting_counts(step, count):
    weightings = enumerate_weightings(step)
    assert len(weightings) == count
    assert all(sum(w.as_tuple()) == 100 for w in weightings)


def test_weightings_are_lexicographic():
    weightings = [w.as_tuple() for w in enumerate_weightings(10)]
    assert weightings == sorted(weightings)
    assert weightings[0] == (0, 0, 0, 100)
    assert weightings[-1] == (100, 0, 0, 0)


@pytest.mark.parametrize("step", [0, -10, 30])
def test_invalid_step(step):
    with pytest.raises(AnalysisError):
        enumerate_weightings(step)


def test_sweep_record_count(running_example, config):
    records = sweep(running_example, range(1, 4), 50, config)
    assert len(records) == 10 * 3
    assert [r.n_clusters for r in records[:3]] == [1, 2, 3]


def test_sweep_extremes(running_example, config):
    records = sweep(running_example, [1, 3], 50, config)
    for record in records:
        expected = 0.0 if record.n_clusters == 1 else 1.0
        assert record.uniform_complexity == expected


def test_sweep_decompositions_partition_the_entities(running_example, config):
    for record in sweep(running_example, [2], 100, config):
        assert record.decomposition.universe == frozenset({1, 2, 3})
        assert len(record.decomposition.clusters) == 2


def test_sweep_rejects_range_beyond_entities(config):
    m = make_monolith({"f": [[(1, "R")]]})
    with pytest.raises(SweepError) as exc:
        sweep(m, [1, 2], 10, config)
    assert exc.value.context == {"n_max": 2, "entities": 1}


def test_sweep_rejects_empty_range(running_example, config):
    with pytest.raises(SweepError):
        DecompositionSweep(running_example, config).run([], 10)


def test_sweep_is_deterministic_across_workers(running_example, config):
    serial = records_to_frame(sweep(running_example, range(1, 4), 25, config, workers=1))
    parallel = records_to_frame(sweep(running_example, range(1, 4), 25, config, workers=4))
    assert serial.equals(parallel)


def test_sweep_computes_max_complexity_once(running_example, config, mocker):
    runner = DecompositionSweep(running_example, config)
    spy = mocker.spy(runner.calculator, "_score")
    runner.run([1, 2], 100)
    # one singleton pass plus one per cell
    assert spy.call_count == 1 + 4 * 2


def record(weights, n, uniform):
    return SweepRecord(weights=Weights.from_tuple(weights), n_clusters=n, uniform_complexity=uniform)


def test_best_per_n_prefers_lowest_then_smallest_weights():
    records = [
        record((100, 0, 0, 0), 2, 0.5),
        record((0, 100, 0, 0), 2, 0.25),
        record((0, 0, 100, 0), 2, 0.25),
        record((0, 0, 0, 100), 3, 0.75),
    ]
    best = best_per_n(records)
    assert list(best) == [2, 3]
    assert best[2].weights.as_tuple() == (0, 0, 100, 0)
    assert best[3].uniform_complexity == 0.75


def test_best_per_n_without_records():
    with pytest.raises(SweepError):
        best_per_n([])


def test_write_sweep_csv(tmp_path):
    path = tmp_path / "sweep.csv"
    write_sweep_csv([record((40, 20, 20, 20), 3, 1 / 3)], path)
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert lines[1] == "40,20,20,20,3,0.333333"
