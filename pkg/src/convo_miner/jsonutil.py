"""Canonical JSON rendering for API bodies and reports.

All floats are rounded to 6 significant digits and keys sorted, so equal
payloads always serialize to identical bytes (the contract tests compare
whole response bodies).
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

__all__ = ["stable", "dumps", "criteria_hash"]


def stable(value: Any) -> Any:
    """Copy of ``value`` with every float rounded to 6 significant digits."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return float(format(value, ".6g"))
    if isinstance(value, dict):
        return {key: stable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [stable(item) for item in value]
    raise TypeError(f"unsupported payload type {type(value)!r}")


def dumps(payload: Any, indent: int | None = None) -> str:
    separators = (",", ": ") if indent else (",", ":")
    return json.dumps(stable(payload), sort_keys=True, separators=separators, indent=indent)


def criteria_hash(criteria_dict: dict) -> str:
    """Short stable digest of a criteria object, embedded in API responses
    so clients can detect stale views."""
    digest = hashlib.sha256(dumps(criteria_dict).encode("utf-8")).hexdigest()
    return digest[:12]
