"""
Decomposition files and the shared partition check.
"""

import json
from pathlib import Path
from typing import AbstractSet, Any, Dict, Union

from pydantic import ValidationError as PydanticValidationError

from models import Decomposition, SweepRecord
from exceptions import PartitionError, SchemaError, TraceParseError


def assert_partition(decomposition: Decomposition, universe: AbstractSet[int]) -> None:
    """
    Check that a decomposition partitions exactly the given entity universe.

    Raises:
        PartitionError: Naming missing and foreign entities
    """
    covered = decomposition.universe
    missing = sorted(set(universe) - covered)
    foreign = sorted(covered - set(universe))
    if missing or foreign:
        raise PartitionError(
            f"Decomposition is not a partition of the universe "
            f"(missing {missing}, foreign {foreign})",
            component="Partition",
            context={"missing": missing, "foreign": foreign}
        )


def decomposition_from_dict(data: Any) -> Decomposition:
    """Build a Decomposition from {"clusters": {name: [entityId, ...]}}."""
    if not isinstance(data, dict) or not isinstance(data.get("clusters"), dict):
        raise SchemaError(
            "Decomposition file must be an object with a 'clusters' object",
            component="Partition"
        )

    clusters = {}
    for name, members in data["clusters"].items():
        if not isinstance(members, list) or not all(
            isinstance(m, int) and not isinstance(m, bool) for m in members
        ):
            raise SchemaError(
                f"Cluster {name!r} must be a list of integer entity ids",
                component="Partition",
                context={"location": f"clusters.{name}"}
            )
        if len(set(members)) != len(members):
            raise SchemaError(
                f"Cluster {name!r} lists an entity twice",
                component="Partition",
                context={"location": f"clusters.{name}"}
            )
        clusters[name] = frozenset(members)

    try:
        return Decomposition(clusters=clusters)
    except PydanticValidationError as e:
        raise SchemaError(
            f"Decomposition violates the partition invariant: {e.errors()[0]['msg']}",
            component="Partition"
        )


def _load_json(file_path: Union[str, Path]) -> Any:
    raw = Path(file_path).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise TraceParseError(
            f"File {file_path} is not valid UTF-8",
            offset=e.start,
            component="Partition"
        )
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise TraceParseError(
            f"Invalid JSON in {file_path}: {e.msg}",
            offset=len(text[:e.pos].encode("utf-8")),
            component="Partition"
        )


def parse_decomposition_file(file_path: Union[str, Path]) -> Decomposition:
    """
    Read a decomposition file.

    Raises:
        OSError: If the file cannot be read
        TraceParseError, SchemaError: If the content is invalid
    """
    return decomposition_from_dict(_load_json(file_path))


def parse_best_decompositions_file(file_path: Union[str, Path]) -> Dict[int, Decomposition]:
    """
    Read the best_decompositions.json of a sweep: {"N": {"weights": [...], "clusters": {...}}}.

    Raises:
        OSError: If the file cannot be read
        TraceParseError, SchemaError: If the content is invalid
    """
    data = _load_json(file_path)
    if not isinstance(data, dict) or not data:
        raise SchemaError(
            "Best decompositions file must be a non-empty object keyed by cluster count",
            component="Partition"
        )
    best = {}
    for key, entry in data.items():
        if not key.isdigit() or int(key) < 1:
            raise SchemaError(
                f"Key {key!r} is not a cluster count",
                component="Partition",
                context={"location": key}
            )
        best[int(key)] = decomposition_from_dict(entry)
    return dict(sorted(best.items()))


def best_decompositions_to_dict(best: Dict[int, SweepRecord]) -> Dict[str, Any]:
    """Best record per N as written by a sweep; parse_best_decompositions_file reads it back."""
    return {
        str(n): {
            "weights": list(record.weights.as_tuple()),
            **decomposition_to_dict(record.decomposition),
        }
        for n, record in best.items()
    }


def decomposition_to_dict(decomposition: Decomposition) -> Dict[str, Any]:
    """Deterministic decomposition-file structure (clusters and members sorted)."""
    return {
        "clusters": {
            name: sorted(decomposition.clusters[name])
            for name in sorted(decomposition.clusters, key=_natural_key)
        }
    }


def serialize_decomposition(decomposition: Decomposition) -> str:
    return json.dumps(decomposition_to_dict(decomposition), indent=2) + "\n"


def _natural_key(name: str):
    # c2 before c10
    stripped = name.lstrip("c")
    return (0, int(stripped), name) if stripped.isdigit() else (1, 0, name)
