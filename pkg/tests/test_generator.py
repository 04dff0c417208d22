import pytest
from pydantic import ValidationError

from models import AccessMode, GenParams
from monolith import serialize_monolith, validate_monolith
from similarity import build_access_index, sm_access
from workload import SyntheticMonolithGenerator, generate_monolith
from exceptions import GeneratorError


def params(**overrides):
    base = dict(
        seed=7,
        n_entities=12,
        n_functionalities=8,
        traces_per_functionality=5,
        max_trace_length=20,
        write_ratio=0.5,
        clusteredness_bias=1.0,
        n_families=4,
    )
    base.update(overrides)
    return GenParams(**base)


def test_same_seed_same_monolith():
    assert serialize_monolith(generate_monolith(params())) == serialize_monolith(generate_monolith(params()))


def test_different_seed_different_monolith():
    assert generate_monolith(params(seed=1)) != generate_monolith(params(seed=2))


def test_shape():
    m = generate_monolith(params())
    assert len(m.functionalities) == 8
    assert all(len(f.traces) == 5 for f in m.functionalities.values())
    assert m.entity_ids == list(range(1, 13))
    assert m.entities[3] == "Entity3"
    assert "Functionality000" in m.functionalities


def test_generated_monolith_validates_and_covers_every_entity():
    m = generate_monolith(params(n_entities=30, n_functionalities=2, max_trace_length=2))
    report = validate_monolith(m)
    assert report.errors == []
    assert m.accessed_entities() == frozenset(range(1, 31))


def test_write_ratio_zero_only_reads():
    m = generate_monolith(params(write_ratio=0.0))
    modes = {a.mode for f in m.functionalities.values() for t in f.traces for a in t.accesses}
    assert modes == {AccessMode.READ}


def test_full_bias_keeps_families_apart():
    generator = SyntheticMonolithGenerator(params())
    m = generator.generate()
    index = build_access_index(m)
    planted = generator.planted_decomposition()
    for a in m.entity_ids:
        for b in m.entity_ids:
            if planted.cluster_of(a) != planted.cluster_of(b):
                assert sm_access(index, a, b) == 0.0


def test_planted_decomposition_uses_contiguous_families():
    planted = SyntheticMonolithGenerator(params(n_entities=10, n_families=3)).planted_decomposition()
    assert planted.as_partition() == {
        frozenset({1, 2, 3, 4}), frozenset({5, 6, 7}), frozenset({8, 9, 10})
    }


def test_zero_entities():
    with pytest.raises(GeneratorError):
        SyntheticMonolithGenerator(params(n_entities=0))


def test_more_families_than_entities():
    with pytest.raises(GeneratorError):
        SyntheticMonolithGenerator(params(n_entities=3, n_families=4))


@pytest.mark.parametrize("field, value", [("write_ratio", 1.5), ("clusteredness_bias", -0.1), ("n_functionalities", 0)])
def test_parameter_ranges(field, value):
    with pytest.raises(ValidationError):
        params(**{field: value})
