"""Three-valued decisions with evidence.

Every geometric decision in the package returns a ``Verdict``: *yes* carries a
machine-checkable certificate where one exists, *no* carries a witness, and
*inconclusive* carries the reason (typically an unresolved ideal).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

YES = "yes"
NO = "no"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    outcome: str
    certificate: Any = None
    witness: Any = None
    reason: str | None = None
    payload: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.outcome not in (YES, NO, INCONCLUSIVE):
            raise ValueError(f"bad outcome {self.outcome!r}")
        if self.outcome == NO and self.witness is None:
            raise ValueError("a 'no' verdict must carry a witness")

    @property
    def is_yes(self) -> bool:
        return self.outcome == YES

    @property
    def is_no(self) -> bool:
        return self.outcome == NO

    @property
    def is_inconclusive(self) -> bool:
        return self.outcome == INCONCLUSIVE

    @staticmethod
    def yes(certificate=None, **payload) -> "Verdict":
        return Verdict(YES, certificate=certificate, payload=payload)

    @staticmethod
    def no(witness, certificate=None, **payload) -> "Verdict":
        return Verdict(NO, witness=witness, certificate=certificate, payload=payload)

    @staticmethod
    def inconclusive(reason: str, **payload) -> "Verdict":
        return Verdict(INCONCLUSIVE, reason=reason, payload=payload)

    def to_json(self) -> dict:
        def enc(x):
            if x is None or isinstance(x, (bool, int, float, str)):
                return x
            if isinstance(x, (list, tuple)):
                return [enc(v) for v in x]
            if isinstance(x, dict):
                return {str(k): enc(v) for k, v in x.items()}
            return str(x)

        out: dict[str, Any] = {"outcome": self.outcome}
        if self.certificate is not None:
            out["certificate"] = enc(self.certificate)
        if self.witness is not None:
            out["witness"] = enc(self.witness)
        if self.reason is not None:
            out["reason"] = self.reason
        if self.payload:
            out["payload"] = enc(self.payload)
        return out
