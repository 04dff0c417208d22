"""
Monolith Validator

Checks structural invariants of parsed monoliths and reports findings
instead of raising.
"""

import logging
from collections import defaultdict
from typing import Dict, List, Tuple

from models import Access, Monolith, ValidationIssue, ValidationReport

logger = logging.getLogger("MikadoValidator")

NONEMPTY_TRACES = "NONEMPTY_TRACES"
DUPLICATE_TRACE_ID = "DUPLICATE_TRACE_ID"
UNUSED_ENTITY = "UNUSED_ENTITY"
DUPLICATE_TRACES = "DUPLICATE_TRACES"
IDENTICAL_FUNCTIONALITIES = "IDENTICAL_FUNCTIONALITIES"


def validate_monolith(monolith: Monolith) -> ValidationReport:
    """
    Validate a monolith.

    Errors: functionalities without traces, duplicate trace ids.
    Warnings: entities never accessed, duplicated trace contents.
    """
    report = ValidationReport()
    signatures: Dict[Tuple[Tuple[Access, ...], ...], List[str]] = defaultdict(list)

    for name in monolith.functionality_names:
        functionality = monolith.functionalities[name]
        if not functionality.traces:
            report.errors.append(ValidationIssue(
                code=NONEMPTY_TRACES,
                message=f"Functionality {name!r} has no traces",
                location=name,
            ))
            continue

        seen_ids = set()
        seen_sequences = {}
        for trace in functionality.traces:
            location = f"{name}.traces[id={trace.id}]"
            if trace.id in seen_ids:
                report.errors.append(ValidationIssue(
                    code=DUPLICATE_TRACE_ID,
                    message=f"Trace id {trace.id} repeated in {name!r}",
                    location=location,
                ))
            seen_ids.add(trace.id)

            if trace.accesses in seen_sequences:
                report.warnings.append(ValidationIssue(
                    code=DUPLICATE_TRACES,
                    message=f"Trace {trace.id} of {name!r} repeats trace {seen_sequences[trace.accesses]}",
                    location=location,
                ))
            else:
                seen_sequences[trace.accesses] = trace.id

        signature = tuple(sorted(seen_sequences, key=lambda seq: [(a.entity, a.mode.value) for a in seq]))
        signatures[signature].append(name)

    for names in signatures.values():
        if len(names) > 1:
            report.warnings.append(ValidationIssue(
                code=IDENTICAL_FUNCTIONALITIES,
                message=f"Functionalities {', '.join(names)} have identical traces",
                location=names[0],
            ))

    for entity in sorted(set(monolith.entities) - monolith.accessed_entities()):
        report.warnings.append(ValidationIssue(
            code=UNUSED_ENTITY,
            message=f"Entity {monolith.entity_label(entity)} is never accessed",
            location=f"entities.{entity}",
        ))

    logger.debug(f"Validation: {len(report.errors)} errors, {len(report.warnings)} warnings")
    return report
