"""Tunable bounds for completion and bounded searches.

Every cap is explicit so failures surface as errors instead of silent
approximations.  The defaults are generous for the problem sizes this
library targets (a handful of variables, generator entries in single
digits).
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Bounds:
    completion_cap: int = 20000       # max rules retained during completion
    orbit_radius: int = 16            # unit-orbit BFS radius (per direction)
    orbit_nodes: int = 20000          # unit-orbit BFS node cap
    region_margin: int = 1            # extra shell checked around witness regions
    separator_box: int = 6            # translate search box for separator witnesses
    verify_box: int = 7               # fallback box edge for bounded verification

    def with_(self, **kwargs) -> "Bounds":
        return replace(self, **kwargs)


DEFAULT_BOUNDS = Bounds()


def parse_bounds(spec: str, base: Bounds = DEFAULT_BOUNDS) -> Bounds:
    """Parse a ``key=value,key=value`` CLI string into a Bounds."""
    if not spec:
        return base
    updates = {}
    for item in spec.split(","):
        key, _, value = item.partition("=")
        key = key.strip()
        if not hasattr(base, key):
            raise ValueError(f"unknown bound {key!r}")
        updates[key] = int(value)
    return base.with_(**updates)
