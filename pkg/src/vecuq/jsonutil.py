"""Canonical JSON serialization shared by CLI exports and API responses.

One writer keeps payloads byte-stable: compact separators, no NaN,
insertion-ordered keys, UTF-8. Callers convert numpy scalars to Python
numbers before serializing.
"""

from __future__ import annotations

import json


def canonical_json(obj) -> bytes:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False, allow_nan=False).encode(
        "utf-8"
    )
