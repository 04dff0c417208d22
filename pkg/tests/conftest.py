import json

import pytest
from hypothesis import strategies as st

from config import MikadoConfig
from models import Access, AccessMode, Decomposition, Functionality, Monolith, Trace

R, W = AccessMode.READ, AccessMode.WRITE


def make_monolith(layout, entities=None) -> Monolith:
    """Monolith from {name: [[(entity, "R"|"W"), ...], ...]} (one list per trace)."""
    functionalities = {}
    seen = dict(entities or {})
    for name, traces in layout.items():
        built = []
        for trace_id, accesses in enumerate(traces):
            built.append(Trace(
                id=trace_id,
                accesses=tuple(Access(entity=e, mode=AccessMode(m)) for e, m in accesses),
            ))
            for e, _ in accesses:
                seen.setdefault(e, None)
        functionalities[name] = Functionality(name=name, traces=tuple(built))
    return Monolith(functionalities=functionalities, entities=seen)


def decomposition(*groups) -> Decomposition:
    return Decomposition.from_groups(groups)


def trace_file_bytes(layout, entities=None) -> bytes:
    body = {
        name: {"traces": [{"id": i, "accesses": [[e, m] for e, m in t]} for i, t in enumerate(traces)]}
        for name, traces in layout.items()
    }
    data = {"functionalities": body}
    if entities is not None:
        data["entities"] = {str(k): v for k, v in entities.items()}
    return json.dumps(data).encode("utf-8")


@pytest.fixture
def running_example() -> Monolith:
    """E = {1,2,3}; f1:[(1,R),(2,W)], f2:[(2,R),(3,W)], f3:[(1,R),(1,W)]."""
    return make_monolith({
        "f1": [[(1, "R"), (2, "W")]],
        "f2": [[(2, "R"), (3, "W")]],
        "f3": [[(1, "R"), (1, "W")]],
    })


@pytest.fixture
def two_entity_system() -> Monolith:
    """f1:[(1,W),(2,W)], f2:[(2,R),(1,R)]."""
    return make_monolith({
        "f1": [[(1, "W"), (2, "W")]],
        "f2": [[(2, "R"), (1, "R")]],
    })


@pytest.fixture
def config() -> MikadoConfig:
    config = MikadoConfig()
    config.analysis.workers = 1
    return config


# -------------------------------------------------------------------------
# HYPOTHESIS STRATEGIES
# -------------------------------------------------------------------------

@st.composite
def monoliths(draw, max_entities=6, max_functionalities=5, max_accesses=8):
    n_entities = draw(st.integers(min_value=1, max_value=max_entities))
    n_functionalities = draw(st.integers(min_value=1, max_value=max_functionalities))
    access = st.tuples(st.integers(1, n_entities), st.sampled_from(["R", "W"]))
    layout = {
        f"f{i}": draw(st.lists(st.lists(access, min_size=1, max_size=max_accesses), min_size=1, max_size=3))
        for i in range(n_functionalities)
    }
    return make_monolith(layout, entities={e: None for e in range(1, n_entities + 1)})


@st.composite
def partitions(draw, entities):
    """Random decomposition of the given entity ids."""
    entities = sorted(entities)
    labels = draw(st.lists(st.integers(0, len(entities) - 1), min_size=len(entities), max_size=len(entities)))
    groups = {}
    for entity, label in zip(entities, labels):
        groups.setdefault(label, set()).add(entity)
    return Decomposition.from_groups(groups.values())
