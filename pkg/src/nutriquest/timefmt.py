"""Timestamp parsing for wire payloads.

Clients (notably browsers) emit RFC 3339 instants with a ``Z`` suffix,
which datetime.fromisoformat only understands from Python 3.11 on;
accept both spellings everywhere.
"""

from __future__ import annotations

from datetime import datetime


def parse_instant(value: str) -> datetime:
    if value.endswith(("Z", "z")):
        value = value[:-1] + "+00:00"
    return datetime.fromisoformat(value)
