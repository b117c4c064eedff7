"""Enumeration caps, overridable through the ``FORGE_CAPS`` environment variable.

``FORGE_CAPS`` is a comma separated list of ``name=value`` pairs, for example
``FORGE_CAPS="group=2000000,subgroups=96"``.
"""
from __future__ import annotations

import os

DEFAULTS = {
    "group": 1_000_000,
    "subgroups": 48,
    "words": 100_000,
    "lattice": 10_000,
    "heart": 48,
}


class CapExceeded(RuntimeError):
    pass


def cap(name: str) -> int:
    raw = os.environ.get("FORGE_CAPS", "")
    for item in raw.split(","):
        if "=" in item:
            key, value = item.split("=", 1)
            if key.strip() == name:
                return int(value)
    return DEFAULTS[name]
