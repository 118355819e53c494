"""JSON encodings for maps, covers and certificates."""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from gridembed.covers import Cover
from gridembed.graph import FiniteGraph
from gridembed.maps import LatticeMap


def map_to_json(m: LatticeMap) -> dict:
    out: dict[str, Any] = {
        "dim": m.k,
        "lip": m.lip,
        "values": {str(v): [int(c) for c in m.values[i]] for i, v in enumerate(m.domain)},
    }
    if m.tags is not None:
        out["tags"] = {str(v): t for v, t in zip(m.domain, m.tags)}
    return out


def map_from_json(G: FiniteGraph, data: dict) -> LatticeMap:
    try:
        k = int(data["dim"])
        values = {int(v): vec for v, vec in data["values"].items()}
        tags = data.get("tags")
        if tags is not None:
            tags = {int(v): int(t) for v, t in tags.items()}
        return LatticeMap.from_dict(G, values, k=k, lip=int(data.get("lip", 1)), tags=tags)
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValueError(f"malformed map JSON: {exc}") from None


def cover_from_json(G: FiniteGraph, data: dict) -> Cover:
    return Cover(G, tuple(tuple(U) for U in data["sets"]), int(data["scale"]), data.get("kind", "custom"))


def certificate_to_json(cert) -> dict:
    return {
        "d": cert.d,
        "minimal": cert.minimal,
        "witness": map_to_json(cert.witness),
        "stats": cert.search_stats,
    }


def dumps(obj: Any) -> str:
    """Deterministic JSON (fixed key order as built, no NaN)."""

    def default(o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        raise TypeError(f"cannot serialise {type(o).__name__}")

    return json.dumps(obj, default=default, allow_nan=False, indent=2) + "\n"
