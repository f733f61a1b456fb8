"""JSON encoding, decoding, and type detection for all structures."""

from __future__ import annotations

import json
from typing import Union

from .core import Partition, Relation
from .pseudometric import Chain, Pseudometric, PseudometricSystem
from .topology import FiniteTopology
from .uniformity import CoverBasis, DiagonalBasis

Structure = Union[
    Relation,
    Partition,
    DiagonalBasis,
    CoverBasis,
    Pseudometric,
    PseudometricSystem,
    Chain,
    FiniteTopology,
]

_DETECTORS = (
    ("entourages", DiagonalBasis),
    ("covers", CoverBasis),
    ("opens", FiniteTopology),
    ("dist", Pseudometric),
    ("metrics", PseudometricSystem),
    ("steps", Chain),
    ("pairs", Relation),
    ("blocks", Partition),
)


def detect(obj: dict) -> type:
    """Pick the structure type from the discriminating field of a payload."""
    if not isinstance(obj, dict):
        raise ValueError("expected a JSON object")
    for field, cls in _DETECTORS:
        if field in obj:
            return cls
    fields = ", ".join(field for field, _ in _DETECTORS)
    raise ValueError(f"cannot detect structure: expected one of the fields {fields}")


def structure_from_json(obj: dict) -> Structure:
    return detect(obj).from_json(obj)


def loads(text: str) -> Structure:
    return structure_from_json(json.loads(text))


def dumps(payload) -> str:
    """Deterministic rendering used for every artifact this package writes."""
    if hasattr(payload, "to_json"):
        payload = payload.to_json()
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
