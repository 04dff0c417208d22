"""
Trace Parser

Parses functionality access traces from the JSON trace-file format,
expanding run-length compressed access lists.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from models import Access, AccessMode, Functionality, Monolith, Trace
from exceptions import ExpansionLimitError, SchemaError, TraceParseError

logger = logging.getLogger("MikadoTraceParser")

MAX_NESTING_DEPTH = 32

_MODES = {mode.value: mode for mode in AccessMode}


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def expand_compressed_accesses(
    items: Any,
    location: str = "accesses",
    max_depth: int = MAX_NESTING_DEPTH
) -> List[Access]:
    """
    Expand a compressed access list into a flat, ordered access sequence.

    ITEMS := [ ITEM* ]; ITEM is either [entityId, "R"|"W"] or
    [count, ITEMS] with count >= 1. Repeat blocks expand depth-first.

    Raises:
        SchemaError: If an item does not follow the grammar
        ExpansionLimitError: If repeat blocks nest deeper than max_depth
    """
    out: List[Access] = []
    _expand_into(out, items, location, 0, max_depth)
    return out


def _expand_into(out: List[Access], items: Any, location: str, depth: int, max_depth: int) -> None:
    if not isinstance(items, list):
        raise SchemaError(
            f"Expected a list of accesses at {location}",
            component="TraceParser",
            context={"location": location}
        )

    for index, item in enumerate(items):
        where = f"{location}[{index}]"
        if not isinstance(item, list) or len(item) != 2:
            raise SchemaError(
                f"Access item must be a two-element array at {where}",
                component="TraceParser",
                context={"location": where}
            )

        head, tail = item
        if not _is_int(head):
            raise SchemaError(
                f"First element must be an integer at {where}",
                component="TraceParser",
                context={"location": where}
            )

        if isinstance(tail, str):
            mode = _MODES.get(tail)
            if mode is None:
                raise SchemaError(
                    f"Unknown access mode {tail!r} at {where}",
                    component="TraceParser",
                    code="UNKNOWN_MODE",
                    context={"location": where}
                )
            out.append(Access(entity=head, mode=mode))
        elif isinstance(tail, list):
            if head < 1:
                raise SchemaError(
                    f"Repeat count must be at least 1, got {head} at {where}",
                    component="TraceParser",
                    code="REPEAT_COUNT",
                    context={"location": where}
                )
            if depth + 1 > max_depth:
                raise ExpansionLimitError(
                    f"Repeat blocks nested deeper than {max_depth} at {where}",
                    component="TraceParser",
                    context={"location": where}
                )
            block: List[Access] = []
            _expand_into(block, tail, f"{where}[1]", depth + 1, max_depth)
            out.extend(block * head)
        else:
            raise SchemaError(
                f"Second element must be a mode string or a nested list at {where}",
                component="TraceParser",
                context={"location": where}
            )


class TraceParser:
    """
    Parse monoliths from trace files.
    """

    def parse_file(self, file_path: Union[str, Path]) -> Monolith:
        """
        Parse a trace file from disk.

        Raises:
            OSError: If the file cannot be read
            TraceParseError, SchemaError: If the content is invalid
        """
        raw = Path(file_path).read_bytes()
        monolith = self.parse_bytes(raw)
        logger.info(
            f"Parsed {file_path}: {len(monolith.functionalities)} functionalities, "
            f"{len(monolith.entities)} entities"
        )
        return monolith

    def parse_bytes(self, raw: bytes) -> Monolith:
        """
        Parse raw UTF-8 JSON bytes into a Monolith.

        Raises:
            TraceParseError: If the bytes are not well-formed JSON (with byte offset)
            SchemaError: If the JSON does not follow the trace-file schema
        """
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise TraceParseError(
                f"Input is not valid UTF-8: {e.reason}",
                offset=e.start,
                component="TraceParser"
            )

        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            offset = len(text[:e.pos].encode("utf-8"))
            raise TraceParseError(
                f"Invalid JSON at byte {offset}: {e.msg}",
                offset=offset,
                component="TraceParser"
            )

        return self.parse_dict(data)

    def parse_dict(self, data: Any) -> Monolith:
        """
        Build a Monolith from decoded JSON. Accepts the wrapped form
        ({"entities", "functionalities"}) and the legacy flat form.
        """
        if not isinstance(data, dict):
            raise SchemaError("Trace file must contain a JSON object", component="TraceParser")

        if "functionalities" in data:
            declared = self._parse_entities(data.get("entities", {}))
            body = data["functionalities"]
            prefix = "functionalities"
            if not isinstance(body, dict):
                raise SchemaError(
                    "'functionalities' must be an object",
                    component="TraceParser",
                    context={"location": prefix}
                )
        else:
            declared = {}
            body = data
            prefix = ""

        functionalities: Dict[str, Functionality] = {}
        entities: Dict[int, Optional[str]] = dict(declared)

        for name, payload in body.items():
            location = f"{prefix}.{name}" if prefix else name
            functionality = self._parse_functionality(name, payload, location)
            functionalities[name] = functionality
            for trace in functionality.traces:
                for entity in trace.entities:
                    entities.setdefault(entity, None)

        return Monolith(functionalities=functionalities, entities=entities)

    def _parse_entities(self, raw: Any) -> Dict[int, Optional[str]]:
        if not isinstance(raw, dict):
            raise SchemaError(
                "'entities' must be an object",
                component="TraceParser",
                context={"location": "entities"}
            )
        entities: Dict[int, Optional[str]] = {}
        for key, name in raw.items():
            try:
                entity = int(key)
            except ValueError:
                raise SchemaError(
                    f"Entity id {key!r} is not an integer",
                    component="TraceParser",
                    context={"location": f"entities.{key}"}
                )
            if name is not None and not isinstance(name, str):
                raise SchemaError(
                    f"Entity name for {key} must be a string",
                    component="TraceParser",
                    context={"location": f"entities.{key}"}
                )
            entities[entity] = name
        return entities

    def _parse_functionality(self, name: str, payload: Any, location: str) -> Functionality:
        if not isinstance(payload, dict) or not isinstance(payload.get("traces"), list):
            raise SchemaError(
                f"Functionality {name!r} must be an object with a 'traces' list",
                component="TraceParser",
                context={"location": location}
            )

        traces = []
        for index, raw_trace in enumerate(payload["traces"]):
            where = f"{location}.traces[{index}]"
            if not isinstance(raw_trace, dict):
                raise SchemaError(f"Trace must be an object at {where}", component="TraceParser")

            trace_id = raw_trace.get("id")
            if not _is_int(trace_id) or trace_id < 0:
                raise SchemaError(
                    f"Trace id must be a non-negative integer at {where}",
                    component="TraceParser",
                    context={"location": where}
                )

            accesses = expand_compressed_accesses(raw_trace.get("accesses"), f"{where}.accesses")
            if not accesses:
                raise SchemaError(
                    f"Trace {trace_id} of {name!r} has no accesses",
                    component="TraceParser",
                    context={"location": where}
                )
            traces.append(Trace(id=trace_id, accesses=tuple(accesses)))

        return Functionality(name=name, traces=tuple(traces))


def parse_trace_file(raw: bytes) -> Monolith:
    """Parse raw trace-file bytes into a Monolith."""
    return TraceParser().parse_bytes(raw)


def monolith_to_dict(monolith: Monolith) -> Dict[str, Any]:
    """Canonical, uncompressed trace-file structure."""
    return {
        "entities": {str(e): monolith.entities[e] for e in monolith.entity_ids},
        "functionalities": {
            name: {
                "traces": [
                    {
                        "id": trace.id,
                        "accesses": [[a.entity, a.mode.value] for a in trace.accesses],
                    }
                    for trace in monolith.functionalities[name].traces
                ]
            }
            for name in monolith.functionality_names
        },
    }


def serialize_monolith(monolith: Monolith) -> str:
    """Serialize a Monolith to canonical trace-file JSON."""
    return json.dumps(monolith_to_dict(monolith), indent=2, ensure_ascii=False) + "\n"
