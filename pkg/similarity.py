"""
Similarity Measures
Access, read, write and sequence similarity between domain entities,
and their weighted combination.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, NamedTuple, Optional, Tuple, Union

import numpy as np
import pandas as pd

from models import AccessMode, Monolith, Weights
from exceptions import DimensionMismatchError, UnknownEntityError, WeightError

logger = logging.getLogger("MikadoSimilarity")


@dataclass(frozen=True)
class AccessIndex:
    """funct(e) and funct(e, m): functionalities accessing each entity."""
    by_entity: Dict[int, FrozenSet[str]]
    by_entity_mode: Dict[Tuple[int, AccessMode], FrozenSet[str]]

    def funct(self, entity: int, mode: Optional[AccessMode] = None) -> FrozenSet[str]:
        if entity not in self.by_entity:
            raise UnknownEntityError(
                f"Unknown entity {entity}",
                component="Similarity",
                context={"entity": entity}
            )
        if mode is None:
            return self.by_entity[entity]
        return self.by_entity_mode[(entity, mode)]


@dataclass(frozen=True)
class SimilarityMatrix:
    """Dense |E| x |E| similarity grid; rows and columns follow `entities`."""
    entities: Tuple[int, ...]
    values: np.ndarray

    def value(self, e1: int, e2: int) -> float:
        index = {e: i for i, e in enumerate(self.entities)}
        return float(self.values[index[e1], index[e2]])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.values, index=list(self.entities), columns=list(self.entities))


class SimilarityMatrices(NamedTuple):
    access: SimilarityMatrix
    write: SimilarityMatrix
    read: SimilarityMatrix
    sequence: SimilarityMatrix


def build_access_index(monolith: Monolith) -> AccessIndex:
    """funct(e, m) contains f iff any trace of f accesses e with mode m."""
    by_mode: Dict[Tuple[int, AccessMode], set] = {
        (e, mode): set() for e in monolith.entities for mode in AccessMode
    }
    for name, functionality in monolith.functionalities.items():
        for trace in functionality.traces:
            for access in trace.accesses:
                by_mode[(access.entity, access.mode)].add(name)

    by_entity_mode = {key: frozenset(names) for key, names in by_mode.items()}
    by_entity = {
        e: by_entity_mode[(e, AccessMode.READ)] | by_entity_mode[(e, AccessMode.WRITE)]
        for e in monolith.entities
    }
    return AccessIndex(by_entity=by_entity, by_entity_mode=by_entity_mode)


def _ratio(first: FrozenSet[str], second: FrozenSet[str]) -> float:
    if not first:
        return 0.0
    return len(first & second) / len(first)


def sm_access(index: AccessIndex, e1: int, e2: int) -> float:
    """#(funct(e1) & funct(e2)) / #funct(e1); 0 when funct(e1) is empty."""
    return _ratio(index.funct(e1), index.funct(e2))


def sm_read(index: AccessIndex, e1: int, e2: int) -> float:
    return _ratio(index.funct(e1, AccessMode.READ), index.funct(e2, AccessMode.READ))


def sm_write(index: AccessIndex, e1: int, e2: int) -> float:
    return _ratio(index.funct(e1, AccessMode.WRITE), index.funct(e2, AccessMode.WRITE))


def _set_matrix(entities: Tuple[int, ...], sets: Dict[int, FrozenSet[str]]) -> SimilarityMatrix:
    n = len(entities)
    values = np.zeros((n, n))
    for i, e1 in enumerate(entities):
        first = sets[e1]
        for j, e2 in enumerate(entities):
            values[i, j] = _ratio(first, sets[e2])
    # matrix convention, also for entities never accessed in this mode
    np.fill_diagonal(values, 1.0)
    return SimilarityMatrix(entities=entities, values=values)


def sm_sequence_matrix(monolith: Monolith, include_self_pairs: bool = False) -> SimilarityMatrix:
    """
    sumPairs(e1, e2) / maxPairs over adjacent accesses of all traces.

    Self-adjacency only counts when include_self_pairs is set. The diagonal
    is 1 by convention.
    """
    entities = tuple(monolith.entity_ids)
    position = {e: i for i, e in enumerate(entities)}
    n = len(entities)
    pairs = np.zeros((n, n))

    for functionality in monolith.functionalities.values():
        for trace in functionality.traces:
            for before, after in zip(trace.accesses, trace.accesses[1:]):
                i, j = position[before.entity], position[after.entity]
                if i == j:
                    if include_self_pairs:
                        pairs[i, i] += 1
                    continue
                pairs[i, j] += 1
                pairs[j, i] += 1

    max_pairs = pairs.max() if n else 0.0
    values = pairs / max_pairs if max_pairs > 0 else np.zeros((n, n))
    np.fill_diagonal(values, 1.0)
    return SimilarityMatrix(entities=entities, values=values)


def similarity_matrices(monolith: Monolith, include_self_pairs: bool = False) -> SimilarityMatrices:
    """All four measures over the monolith's entities in ascending id order."""
    index = build_access_index(monolith)
    entities = tuple(monolith.entity_ids)
    matrices = SimilarityMatrices(
        access=_set_matrix(entities, index.by_entity),
        write=_set_matrix(entities, {e: index.funct(e, AccessMode.WRITE) for e in entities}),
        read=_set_matrix(entities, {e: index.funct(e, AccessMode.READ) for e in entities}),
        sequence=sm_sequence_matrix(monolith, include_self_pairs),
    )
    logger.debug(f"Similarity matrices built for {len(entities)} entities")
    return matrices


def validate_weights(weights: Weights, step: int = 10) -> None:
    """
    Accept iff all components are non-negative multiples of step summing to 100.

    Raises:
        WeightError: WEIGHT_GRID for negative or off-grid components, WEIGHT_SUM otherwise
    """
    values = weights.as_tuple()
    if any(v < 0 or v % step != 0 for v in values):
        raise WeightError(
            f"Weights {values} are not non-negative multiples of {step}",
            component="Similarity",
            code="WEIGHT_GRID",
            context={"weights": list(values), "step": step}
        )
    if sum(values) != 100:
        raise WeightError(
            f"Weights {values} sum to {sum(values)}, expected 100",
            component="Similarity",
            code="WEIGHT_SUM",
            context={"weights": list(values)}
        )


def combine(matrices: Iterable[SimilarityMatrix], weights: Weights) -> SimilarityMatrix:
    """
    Weighted combination (access, write, read, sequence) / 100.

    Raises:
        DimensionMismatchError: If the matrices disagree on entity ordering
    """
    access, write, read, sequence = tuple(matrices)
    for other in (write, read, sequence):
        if other.entities != access.entities or other.values.shape != access.values.shape:
            raise DimensionMismatchError(
                "Similarity matrices do not share an entity ordering",
                component="Similarity"
            )

    values = (
        weights.access * access.values
        + weights.write * write.values
        + weights.read * read.values
        + weights.sequence * sequence.values
    ) / 100.0
    return SimilarityMatrix(entities=access.entities, values=values)


def dump_matrix_csv(matrix: SimilarityMatrix, path: Union[str, Path]) -> None:
    """CSV with entity-id header row and column, 6 decimal places."""
    frame = matrix.to_frame()
    frame.index.name = "entity"
    frame.to_csv(path, float_format="%.6f", lineterminator="\n")
