"""Event-script documents: parsing, validation and trace serialization.

A script is either one JSON object::

    {"version": 1,
     "context": {"n": 2, "m": 2},
     "initial_state": {"J": 0, "Lambda": 0, "L": 0},
     "events": [{"type": "multiple_point", "sign": 1}]}

or the same thing line-delimited: the first line is the header (everything
except ``events``) and every following non-blank line is one event record.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import jsonschema

from .calculus import (
    CalculusError,
    EventKind,
    ImmersionContext,
    InvariantState,
    StrataEvent,
    Target,
    defined_invariants,
)

__all__ = [
    "SCRIPT_VERSION",
    "SchemaError",
    "EventScript",
    "parse_script",
    "load_script",
    "dump_script",
    "context_to_record",
    "context_from_record",
    "event_to_record",
    "event_from_record",
    "trace_to_records",
    "trace_from_records",
    "bundled_scripts",
    "bundled_script_path",
]

SCRIPT_VERSION = 1

_EVENT_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "properties": {
                "type": {"const": "self_tangency"},
                "depth": {"type": "integer", "minimum": 2},
                "sign": {"enum": [1, -1]},
            },
            "required": ["type", "depth", "sign"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "type": {"const": "multiple_point"},
                "sign": {"enum": [1, -1]},
            },
            "required": ["type", "sign"],
            "additionalProperties": False,
        },
    ]
}

_CONTEXT_SCHEMA = {
    "type": "object",
    "properties": {
        "n": {"type": "integer", "minimum": 2},
        "m": {"type": "integer", "minimum": 2},
        "target": {"enum": [t.value for t in Target]},
        "source_oriented": {"type": "boolean"},
        "cond_lambda": {"type": "boolean"},
        "cond_l": {"type": "boolean"},
        "tor_condition": {"type": "boolean"},
    },
    "required": ["n", "m"],
    "additionalProperties": False,
}

SCRIPT_SCHEMA = {
    "type": "object",
    "properties": {
        "version": {"type": "integer"},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "context": _CONTEXT_SCHEMA,
        "initial_state": {
            "type": "object",
            "patternProperties": {r"^(J_\d+|J|Lambda|L)$": {"type": "integer"}},
            "additionalProperties": False,
        },
        "events": {"type": "array", "items": _EVENT_SCHEMA},
    },
    "required": ["version", "context", "initial_state", "events"],
    "additionalProperties": False,
}


class SchemaError(ValueError):
    """The script document is malformed or does not fit its own context."""


@dataclass
class EventScript:
    context: ImmersionContext
    initial_state: InvariantState
    events: List[StrataEvent] = field(default_factory=list)
    name: Optional[str] = None
    description: Optional[str] = None


def context_to_record(ctx: ImmersionContext) -> dict:
    return {
        "n": ctx.n, "m": ctx.m, "target": ctx.target.value,
        "source_oriented": ctx.source_oriented, "cond_lambda": ctx.cond_lambda,
        "cond_l": ctx.cond_l, "tor_condition": ctx.tor_condition,
    }


def context_from_record(rec: dict) -> ImmersionContext:
    rec = dict(rec)
    rec["target"] = Target(rec.get("target", Target.EUCLIDEAN.value))
    return ImmersionContext(**rec)


def event_to_record(ev: StrataEvent) -> dict:
    if ev.kind is EventKind.SELF_TANGENCY:
        return {"type": ev.kind.value, "depth": ev.depth, "sign": ev.sign}
    return {"type": ev.kind.value, "sign": ev.sign}


def event_from_record(rec: dict) -> StrataEvent:
    return StrataEvent(EventKind(rec["type"]), rec["sign"], rec.get("depth"))


def _split_lines(text: str) -> dict:
    records = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"line {lineno}: {exc.msg}") from None
    if not records or not isinstance(records[0], dict):
        raise SchemaError("empty script or missing header line")
    doc = dict(records[0])
    if "events" in doc:
        raise SchemaError("line-delimited header must not carry 'events'")
    doc["events"] = records[1:]
    return doc


def parse_script(text: str) -> EventScript:
    """Parse and validate a script; raises :class:`SchemaError`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        doc = _split_lines(text)
    if not isinstance(doc, dict):
        raise SchemaError("script must be a JSON object")
    if doc.get("version") != SCRIPT_VERSION:
        raise SchemaError(f"unsupported script version {doc.get('version')!r}; "
                          f"expected {SCRIPT_VERSION}")
    try:
        jsonschema.validate(doc, SCRIPT_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{where}: {exc.message}") from None

    try:
        ctx = context_from_record(doc["context"])
        events = [event_from_record(r) for r in doc["events"]]
    except CalculusError as exc:
        raise SchemaError(str(exc)) from None

    expected = set(defined_invariants(ctx).keys())
    got = set(doc["initial_state"])
    if got != expected:
        raise SchemaError(
            f"initial_state keys {sorted(got)} do not match the invariants "
            f"defined for this context {sorted(expected)}")
    for i, ev in enumerate(events):
        if ev.depth is not None and ev.depth > ctx.m:
            raise SchemaError(f"events/{i}: depth {ev.depth} exceeds m={ctx.m}")
    lam = doc["initial_state"].get("Lambda")
    if lam is not None and lam not in (0, 1):
        raise SchemaError(f"initial_state/Lambda must be 0 or 1, got {lam}")

    return EventScript(
        context=ctx,
        initial_state=InvariantState.from_flat(doc["initial_state"]),
        events=events,
        name=doc.get("name"),
        description=doc.get("description"),
    )


def load_script(path) -> EventScript:
    return parse_script(Path(path).read_text(encoding="utf-8"))


def dump_script(script: EventScript, line_delimited: bool = False) -> str:
    header = {"version": SCRIPT_VERSION}
    if script.name is not None:
        header["name"] = script.name
    if script.description is not None:
        header["description"] = script.description
    header["context"] = context_to_record(script.context)
    header["initial_state"] = script.initial_state.as_flat()
    events = [event_to_record(e) for e in script.events]
    if line_delimited:
        return "\n".join(json.dumps(r) for r in [header, *events]) + "\n"
    return json.dumps({**header, "events": events}, indent=2) + "\n"


def trace_to_records(trace: Sequence[InvariantState],
                     events: Sequence[StrataEvent]) -> List[dict]:
    rows = []
    for i, state in enumerate(trace):
        ev = event_to_record(events[i - 1]) if i else None
        rows.append({"step": i, "event": ev, "state": state.as_flat()})
    return rows


def trace_from_records(rows: Sequence[dict]):
    """Inverse of :func:`trace_to_records`: ``(trace, events)``."""
    trace = [InvariantState.from_flat(r["state"]) for r in rows]
    events = [event_from_record(r["event"]) for r in rows[1:]]
    return trace, events


def bundled_scripts() -> Dict[str, Path]:
    root = resources.files("genimm") / "data" / "scripts"
    return {p.name: Path(str(p)) for p in sorted(root.iterdir(), key=lambda p: p.name)
            if p.name.endswith(".json")}


def bundled_script_path(name: str) -> Path:
    scripts = bundled_scripts()
    if name not in scripts:
        raise KeyError(f"no bundled script {name!r}; have {sorted(scripts)}")
    return scripts[name]
