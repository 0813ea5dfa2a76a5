"""Three-valued outcome shared by every check."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Outcome(Enum):
    """Result of a decision procedure."""
    CERTIFIED = "certified"
    REFUTED = "refuted"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    """A Certified, Refuted or Unknown outcome together with its evidence.

    A refutation always carries a witness, an unknown outcome carries diagnostics.
    """
    outcome: Outcome
    method: str
    certificate: dict[str, Any] = field(default_factory=dict)
    witness: Any = None
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def certified(cls, method: str, **certificate) -> Verdict:
        return cls(Outcome.CERTIFIED, method, certificate=certificate)

    @classmethod
    def refuted(cls, method: str, witness, **diagnostics) -> Verdict:
        return cls(Outcome.REFUTED, method, witness=witness, diagnostics=diagnostics)

    @classmethod
    def unknown(cls, method: str, **diagnostics) -> Verdict:
        return cls(Outcome.UNKNOWN, method, diagnostics=diagnostics)

    @property
    def is_certified(self) -> bool:
        return self.outcome is Outcome.CERTIFIED

    @property
    def is_refuted(self) -> bool:
        return self.outcome is Outcome.REFUTED

    @property
    def is_unknown(self) -> bool:
        return self.outcome is Outcome.UNKNOWN
