"""
Restriction of monoliths to common functionalities and entities.
"""

import logging
from typing import AbstractSet, Dict, FrozenSet, List, Optional, Tuple

from models import Functionality, Monolith, Trace
from exceptions import UnknownReferenceError

logger = logging.getLogger("MikadoRestriction")


def entity_matches(a: Monolith, b: Monolith) -> Dict[int, int]:
    """
    Map entity ids of `a` to the matching entity ids of `b`.

    Entities match by display name when both sides name them, otherwise by id.
    """
    named_b = {name: entity for entity, name in b.entities.items() if name}
    matches: Dict[int, int] = {}
    for entity, name in a.entities.items():
        if name and name in named_b:
            matches[entity] = named_b[name]
        elif entity in b.entities and not (name and b.entities[entity]):
            matches[entity] = entity
    return matches


def common_subset(a: Monolith, b: Monolith) -> Tuple[FrozenSet[str], FrozenSet[int]]:
    """
    Functionality names and entity ids (in `a`'s id space) present in both monoliths.
    """
    names = frozenset(a.functionalities) & frozenset(b.functionalities)
    entities = frozenset(entity_matches(a, b))
    return names, entities


def restrict_monolith(
    monolith: Monolith,
    keep_functionalities: AbstractSet[str],
    keep_entities: AbstractSet[int],
    findings: Optional[List[str]] = None
) -> Monolith:
    """
    Keep only the given functionalities and entities.

    Accesses to dropped entities are removed preserving order; traces that
    become empty are dropped, and so are functionalities left without traces.

    Raises:
        UnknownReferenceError: If a keep set names something the monolith lacks
    """
    unknown_names = sorted(set(keep_functionalities) - monolith.functionalities.keys())
    unknown_entities = sorted(set(keep_entities) - monolith.entities.keys())
    if unknown_names or unknown_entities:
        raise UnknownReferenceError(
            "Keep sets reference unknown functionalities or entities",
            component="Restriction",
            context={"functionalities": unknown_names, "entities": unknown_entities}
        )

    functionalities: Dict[str, Functionality] = {}
    for name in monolith.functionality_names:
        if name not in keep_functionalities:
            continue
        traces = []
        for trace in monolith.functionalities[name].traces:
            kept = tuple(a for a in trace.accesses if a.entity in keep_entities)
            if kept:
                traces.append(Trace(id=trace.id, accesses=kept))
        if traces or not monolith.functionalities[name].traces:
            functionalities[name] = Functionality(name=name, traces=tuple(traces))
        else:
            message = f"Functionality {name!r} dropped: none of its accesses survive the restriction"
            logger.warning(message)
            if findings is not None:
                findings.append(message)

    entities = {e: monolith.entities[e] for e in monolith.entity_ids if e in keep_entities}
    return Monolith(functionalities=functionalities, entities=entities)
