from enum import Enum
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field, model_validator


class VerdictStatus(str, Enum):
    VERIFIED = "verified"
    REFUTED = "refuted"
    UNKNOWN = "unknown"
    ERROR = "error"

    @property
    def exit_code(self) -> int:
        return {"verified": 0, "refuted": 1}.get(self.value, 2)


class CheckResult(BaseModel):
    """Outcome of one exact check, before it becomes a CLI verdict."""
    name: str = Field(description="Which check produced this result")
    passed: bool
    witness: Optional[Dict[str, Any]] = Field(default=None, description="Certificate on success")
    counterexample: Optional[Dict[str, Any]] = Field(default=None, description="Where the check failed")
    details: Dict[str, Any] = Field(default_factory=dict, description="Counts, statistics, notes")

    def to_verdict(self, command: str) -> "Verdict":
        if self.passed:
            return Verdict(
                command=command,
                status=VerdictStatus.VERIFIED,
                witness=self.witness if self.witness is not None else {"check": self.name},
                details=self.details,
            )
        return Verdict(
            command=command,
            status=VerdictStatus.REFUTED,
            counterexample=self.counterexample if self.counterexample is not None else {"check": self.name},
            details=self.details,
        )


class Verdict(BaseModel):
    command: str = Field(description="Subcommand that produced the verdict")
    status: VerdictStatus
    witness: Optional[Dict[str, Any]] = None
    counterexample: Optional[Dict[str, Any]] = None
    details: Dict[str, Any] = Field(default_factory=dict)
    timing_ms: Optional[float] = Field(default=None, description="Only filled when timing is requested")

    @model_validator(mode="after")
    def _payload_matches_status(self) -> "Verdict":
        if self.status == VerdictStatus.VERIFIED and (self.witness is None or self.counterexample is not None):
            raise ValueError("a verified verdict carries a witness and no counterexample")
        if self.status == VerdictStatus.REFUTED and (self.counterexample is None or self.witness is not None):
            raise ValueError("a refuted verdict carries a counterexample and no witness")
        return self

    @classmethod
    def unknown(cls, command: str, **details: Any) -> "Verdict":
        return cls(command=command, status=VerdictStatus.UNKNOWN, details=details)

    @classmethod
    def error(cls, command: str, error: Dict[str, Any]) -> "Verdict":
        return cls(command=command, status=VerdictStatus.ERROR, details={"error": error})

    @property
    def exit_code(self) -> int:
        return self.status.exit_code
