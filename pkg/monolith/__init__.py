"""
Monolith Package

Parsing, validation, restriction and coverage of functionality traces.
"""

from .trace_parser import (
    TraceParser,
    expand_compressed_accesses,
    parse_trace_file,
    serialize_monolith,
)
from .validator import validate_monolith
from .restriction import common_subset, restrict_monolith
from .coverage import compare_coverage
from .partition import (
    assert_partition,
    best_decompositions_to_dict,
    parse_best_decompositions_file,
    parse_decomposition_file,
    serialize_decomposition,
)

__all__ = [
    "TraceParser",
    "expand_compressed_accesses",
    "parse_trace_file",
    "serialize_monolith",
    "validate_monolith",
    "common_subset",
    "restrict_monolith",
    "compare_coverage",
    "assert_partition",
    "best_decompositions_to_dict",
    "parse_best_decompositions_file",
    "parse_decomposition_file",
    "serialize_decomposition",
]
