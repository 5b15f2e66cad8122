"""JSON file formats: system descriptions, report documents, hashing.

System files carry the plant matrices, the input alphabet, the per-output
quantizer stages, and optionally a name and an initial-state bound.
Numbers round-trip exactly (json keeps repr precision), and report
documents serialize with sorted keys so identical runs produce identical
bytes.
"""

import datetime
import hashlib
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from .errors import InputFormatError
from .plant import QuantizedLtiSystem
from .quantizer import IntervalQuantizer, ProductQuantizer


@dataclass(frozen=True)
class SystemDescription:
    """A parsed system file: the plant plus file-level metadata."""

    system: QuantizedLtiSystem
    x0_bound: Optional[float]
    name: Optional[str]
    source: Optional[str]


def _require(payload, key, kind):
    if key not in payload:
        raise InputFormatError(f"missing field {key!r}")
    value = payload[key]
    if kind == "matrix":
        if (not isinstance(value, list) or not value
                or not all(isinstance(row, list) for row in value)):
            raise InputFormatError(f"field {key!r} must be a list of rows")
    elif kind == "list":
        if not isinstance(value, list) or not value:
            raise InputFormatError(f"field {key!r} must be a non-empty list")
    return value


def parse_system_payload(payload, source=None):
    """Build a SystemDescription from a decoded JSON object."""
    if not isinstance(payload, dict):
        raise InputFormatError("system description must be a JSON object")
    A = _require(payload, "A", "matrix")
    B = _require(payload, "B", "matrix")
    C = _require(payload, "C", "matrix")
    D = _require(payload, "D", "matrix")
    inputs = _require(payload, "inputs", "list")
    stages = _require(payload, "quantizer", "list")
    dims = []
    for i, stage in enumerate(stages):
        if (not isinstance(stage, dict) or "breakpoints" not in stage
                or "levels" not in stage):
            raise InputFormatError(
                f"quantizer stage {i} must be an object with 'breakpoints' "
                "and 'levels'"
            )
        try:
            dims.append(IntervalQuantizer(
                breakpoints=tuple(float(b) for b in stage["breakpoints"]),
                levels=tuple(float(v) for v in stage["levels"]),
            ))
        except (TypeError, ValueError) as err:
            raise InputFormatError(f"quantizer stage {i}: {err}") from err
    try:
        input_rows = [[float(x) for x in row] if isinstance(row, list)
                      else [float(row)] for row in inputs]
    except (TypeError, ValueError) as err:
        raise InputFormatError(f"field 'inputs': {err}") from err
    system = QuantizedLtiSystem(
        A=np.asarray(A, dtype=np.float64),
        B=np.asarray(B, dtype=np.float64),
        C=np.asarray(C, dtype=np.float64),
        D=np.asarray(D, dtype=np.float64),
        inputs=np.asarray(input_rows, dtype=np.float64),
        quantizer=ProductQuantizer(dims=tuple(dims)),
    )
    x0_bound = payload.get("x0_bound")
    if x0_bound is not None:
        x0_bound = float(x0_bound)
        if not x0_bound > 0.0:
            raise InputFormatError("field 'x0_bound' must be positive")
    name = payload.get("name")
    if name is not None and not isinstance(name, str):
        raise InputFormatError("field 'name' must be a string")
    return SystemDescription(system=system, x0_bound=x0_bound, name=name,
                             source=source)


def load_system(path):
    """Parse a system description file, with position diagnostics."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise InputFormatError(f"{path}: {err.strerror or err}") from err
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as err:
        raise InputFormatError(
            f"{path}:{err.lineno}:{err.colno}: {err.msg}"
        ) from err
    try:
        return parse_system_payload(payload, source=str(path))
    except InputFormatError as err:
        raise InputFormatError(f"{path}: {err}") from err


def system_to_payload(system, x0_bound=None, name=None):
    """JSON-ready dict for a system; inverse of parse_system_payload."""
    payload = {}
    if name is not None:
        payload["name"] = name
    payload.update({
        "A": [[float(x) for x in row] for row in system.A],
        "B": [[float(x) for x in row] for row in system.B],
        "C": [[float(x) for x in row] for row in system.C],
        "D": [[float(x) for x in row] for row in system.D],
        "inputs": [[float(x) for x in row] for row in system.inputs],
        "quantizer": [
            {"breakpoints": [float(b) for b in dim.breakpoints],
             "levels": [float(v) for v in dim.levels]}
            for dim in system.quantizer.dims
        ],
    })
    if x0_bound is not None:
        payload["x0_bound"] = float(x0_bound)
    return payload


def description_to_payload(desc):
    return system_to_payload(desc.system, x0_bound=desc.x0_bound,
                             name=desc.name)


def canonical_json(obj):
    """Compact, key-sorted serialization used for hashing."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def system_hash(system):
    """sha256 over the canonical serialization of the dynamical content."""
    payload = system_to_payload(system)
    payload.pop("name", None)
    payload.pop("x0_bound", None)
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


def report_document(command, result, *, system=None, source=None,
                    timestamp=True, elapsed=None):
    """Wrap a command result in the common report envelope.

    With timestamp=False both the wall-clock stamp and the elapsed time
    are omitted, making repeated identical invocations byte-identical.
    """
    doc = {
        "tool": {"name": "quantobs", "version": __version__},
        "command": command,
        "source": source,
    }
    if system is not None:
        doc["system_sha256"] = system_hash(system)
    if timestamp:
        doc["generated_at"] = datetime.datetime.now(
            datetime.timezone.utc
        ).isoformat()
        if elapsed is not None:
            doc["elapsed_seconds"] = float(elapsed)
    doc["result"] = result
    return doc


def dump_document(doc):
    """Stable string form of a report document."""
    return json.dumps(doc, indent=2, sort_keys=True)
