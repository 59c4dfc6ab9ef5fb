"""Verification report record."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

CERTIFIED = "certified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item") and not isinstance(v, (str, bytes)):
        return _jsonable(v.item())
    return v


@dataclass
class VerificationReport:
    """Outcome of one certification run.

    ``certified_sup`` is the largest interval upper bound over accepted boxes
    (for an unfinished run, the bound over everything still open).
    ``witness`` holds the refuting point for ``status == "refuted"``.
    """

    region: str
    status: str
    certified_sup: float
    boxes_processed: int = 0
    max_depth: int = 0
    elapsed_ms: float = 0.0
    details: dict = field(default_factory=dict)
    witness: dict | None = None

    @property
    def certified(self):
        return self.status == CERTIFIED

    def to_dict(self, timing=True):
        out = {
            "region": self.region,
            "status": self.status,
            "certified_sup": self.certified_sup,
            "boxes_processed": self.boxes_processed,
            "max_depth": self.max_depth,
            "elapsed_ms": self.elapsed_ms if timing else None,
            "details": self.details,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return _jsonable(out)
