"""Verdict and witness-square records shared by all checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"
NOT_FOUND = "NOT-FOUND"


@dataclass(frozen=True)
class Verdict:
    property_name: str
    outcome: str  # PASS | FAIL | INCONCLUSIVE | NOT-FOUND
    bounds: dict = field(default_factory=dict)
    witness: Any = None
    stats: dict = field(default_factory=dict)
    detail: str = ""

    def __post_init__(self):
        if self.outcome == FAIL and self.witness is None:
            raise ValueError("FAIL verdict requires a witness")

    @property
    def passed(self) -> bool:
        return self.outcome == PASS

    def summary(self) -> str:
        tail = ""
        if self.outcome == PASS and self.bounds:
            tail = " up to " + ", ".join(f"{k}={v}" for k, v in sorted(self.bounds.items()))
        if self.detail:
            tail += f" ({self.detail})"
        return f"{self.property_name}: {self.outcome}{tail}"

    def to_json(self) -> dict:
        w = self.witness
        if w is not None and hasattr(w, "to_json"):
            w = w.to_json()
        return {
            "property": self.property_name,
            "outcome": self.outcome,
            "bounds": dict(self.bounds),
            "witness": w,
            "stats": dict(self.stats),
            "detail": self.detail,
        }


@dataclass(frozen=True)
class MediatorAnalysis:
    """Why a candidate square is not a pullback: a cone with 0 or >=2 mediators."""

    cone: Any  # serialized test cone
    count: int

    @property
    def mode(self) -> str:
        return "no-mediator" if self.count == 0 else "non-unique-mediator"

    def to_json(self) -> dict:
        return {"cone": self.cone, "count": self.count, "mode": self.mode}


@dataclass(frozen=True)
class WitnessSquare:
    """A commuting square, which leg is an F-image, its L-image, and the
    mediator analysis that refutes (or confirms) pullback-ness of the image."""

    square: dict  # corner/leg data, serializable
    f_image_leg: str
    l_image: dict
    analysis: Optional[MediatorAnalysis]

    def to_json(self) -> dict:
        return {
            "square": self.square,
            "f_image_leg": self.f_image_leg,
            "l_image": self.l_image,
            "analysis": None if self.analysis is None else self.analysis.to_json(),
        }
