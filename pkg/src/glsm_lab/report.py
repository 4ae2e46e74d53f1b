"""Deterministic reports and their text/JSON renderings.

JSON schema (``schema = "glsm-lab.report"``, ``schema_version = 1``)::

    {
      "schema": "glsm-lab.report",
      "schema_version": 1,
      "command": str,            # command name plus normalised options
      "model": str,              # model name from the file
      "input_sha256": str,       # digest of the model file bytes
      "ok": bool,
      "result": {...},           # command specific payload
      "warnings": [str, ...],
      "certificates": [{...}, ...]
    }

Rationals are always strings ``"num/den"`` (or ``"n"`` when integral),
supports are sorted lists of variable names, keys are sorted.
"""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field, fields, is_dataclass
from fractions import Fraction

from .poly import Polynomial

SCHEMA = "glsm-lab.report"
SCHEMA_VERSION = 1


@dataclass
class Report:
    command: str
    input_digest: str
    model_name: str
    result: dict
    ok: bool = True
    warnings: list[str] = field(default_factory=list)
    certificates: list[dict] = field(default_factory=list)


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def jsonable(x):
    """Exact, order-stable conversion to JSON-compatible values."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):  # pragma: no cover - exactness contract
        raise TypeError("floats are not allowed in reports")
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, Polynomial):
        return str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return sorted((jsonable(v) for v in x), key=lambda v: (str(type(v)), v))
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if is_dataclass(x):
        return {f.name: jsonable(getattr(x, f.name)) for f in fields(x)}
    return str(x)


def as_dict(report: Report) -> dict:
    return {
        "schema": SCHEMA,
        "schema_version": SCHEMA_VERSION,
        "command": report.command,
        "model": report.model_name,
        "input_sha256": report.input_digest,
        "ok": report.ok,
        "result": jsonable(report.result),
        "warnings": [str(w) for w in report.warnings],
        "certificates": jsonable(report.certificates),
    }


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def _render(value, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, dict) or (isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v)):
                out.append(f"{pad}{k}:")
                _render(v, indent + 1, out)
            else:
                out.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for i, v in enumerate(value):
            if isinstance(v, (dict, list)) and not (isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)):
                out.append(f"{pad}- [{i}]")
                _render(v, indent + 1, out)
            else:
                out.append(f"{pad}- {_scalar(v)}")
    else:
        out.append(f"{pad}{_scalar(value)}")


def emit(report: Report, fmt: str = "text") -> bytes:
    d = as_dict(report)
    if fmt == "json":
        return (json.dumps(d, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    out = [
        f"command: {d['command']}",
        f"model: {d['model']}",
        f"input sha256: {d['input_sha256']}",
        f"status: {'ok' if d['ok'] else 'FAILED'}",
        "result:",
    ]
    _render(d["result"], 1, out)
    out.append("warnings:" + ("" if d["warnings"] else " none"))
    if d["warnings"]:
        _render(d["warnings"], 1, out)
    out.append("certificates:" + ("" if d["certificates"] else " none"))
    if d["certificates"]:
        _render(d["certificates"], 1, out)
    return ("\n".join(out) + "\n").encode("utf-8")
