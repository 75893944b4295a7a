"""Machine-readable reports: one verdict row per claim, each citing a result tag."""
from __future__ import annotations

import json
import os
import tempfile
from datetime import datetime, timezone
from fractions import Fraction
from importlib import metadata
from pathlib import Path
from typing import Any, Optional

import jsonschema
import numpy as np

REF_TAGS = frozenset({
    "etsu", "cortop", "submfam", "topfor", "class1", "splitt2", "tgcsup", "l17",
    "p1", "p2", "su3", "su5", "tsam", "inva", "def", "l1", "deffam", "corfam",
})

VERDICT_SCHEMA = {
    "type": "object",
    "required": ["claim", "ref", "symbolic"],
    "properties": {
        "claim": {"type": "string"},
        "ref": {"type": "string", "enum": sorted(REF_TAGS)},
        "symbolic": {},
        "numeric": {},
        "tolerance": {"type": ["number", "string", "null"]},
        "pass": {"type": "boolean"},
        "witness": {"type": ["string", "null"]},
    },
    "additionalProperties": False,
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["command", "inputs", "verdicts", "seed", "version", "timestamp"],
    "properties": {
        "command": {"type": "string"},
        "inputs": {"type": "object"},
        "verdicts": {"type": "array", "items": VERDICT_SCHEMA},
        "seed": {"type": ["integer", "null"]},
        "version": {"type": "string"},
        "timestamp": {"type": "string"},
        "data": {"type": "object"},
    },
    "additionalProperties": False,
}


def package_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def to_jsonable(x: Any) -> Any:
    """Fractions become ``"p/q"`` strings; numpy scalars and arrays become
    plain Python values; non-finite floats become strings."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return to_jsonable(x.tolist())
    if isinstance(x, np.generic):
        return to_jsonable(x.item())
    if isinstance(x, float) and not np.isfinite(x):
        return str(x)
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):  # str enums
        return x.value
    return x


def verdict(claim: str, ref: str, symbolic, numeric=None, tolerance=None,
            passed: Optional[bool] = None, witness: Optional[str] = None) -> dict:
    """A verdict row.  ``pass`` is kept only when both values are present."""
    if ref not in REF_TAGS:
        raise ValueError(f"unknown result tag {ref!r}")
    row = {"claim": claim, "ref": ref, "symbolic": to_jsonable(symbolic)}
    if numeric is not None:
        row["numeric"] = to_jsonable(numeric)
    if tolerance is not None:
        row["tolerance"] = to_jsonable(tolerance)
    if witness is not None:
        row["witness"] = witness
    if passed is not None and symbolic is not None and numeric is not None:
        row["pass"] = bool(passed)
    return row


def make_report(command: str, inputs: dict, verdicts: list, seed=None,
                data: Optional[dict] = None) -> dict:
    rep = {
        "command": command,
        "inputs": to_jsonable(inputs),
        "verdicts": verdicts,
        "seed": seed,
        "version": package_version(),
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    if data is not None:
        rep["data"] = to_jsonable(data)
    validate(rep)
    return rep


def validate(report: dict) -> None:
    jsonschema.validate(report, REPORT_SCHEMA)


def failed(report: dict) -> bool:
    return any(row.get("pass") is False for row in report["verdicts"])


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> dict:
    rep = json.loads(text)
    validate(rep)
    return rep


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the target directory and rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
