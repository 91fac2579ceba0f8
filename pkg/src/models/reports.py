from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

MAX_RECORDED_FAILURES = 5


class SuitePhase(str, Enum):
    ALGEBRA = "algebra"
    INTERVAL = "interval"
    QUANTIZATION = "quantization"
    MODULAR = "modular"
    SYMBOLIC = "symbolic"
    DETERMINISM = "determinism"


class CriterionReport(BaseModel):
    """One acceptance criterion: how many instances ran, how many failed, and what was seen."""
    criterion: int = Field(description="Acceptance criterion number")
    name: str
    phase: SuitePhase
    instances: int = 0
    failures: int = 0
    statistics: Dict[str, Any] = Field(default_factory=dict, description="Aggregates such as rates and tables")
    counterexamples: List[Dict[str, Any]] = Field(default_factory=list,
                                                  description="The first failing instances")
    notes: List[str] = Field(default_factory=list)
    errors: List[Dict[str, Any]] = Field(default_factory=list, description="Errors raised while running the suite")

    @property
    def passed(self) -> bool:
        return self.failures == 0 and not self.errors and self.instances > 0

    def record_failure(self, counterexample: Dict[str, Any]) -> None:
        self.failures += 1
        if len(self.counterexamples) < MAX_RECORDED_FAILURES:
            self.counterexamples.append(counterexample)


class SelfTestReport(BaseModel):
    seed: int
    field: Optional[str] = Field(default=None, description="Field of the hcompose and pi0 sweeps over F_p")
    sizes: Dict[str, int] = Field(default_factory=dict)
    criteria: List[CriterionReport] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.criteria) and all(c.passed for c in self.criteria)

    def summary(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "criteria": {str(c.criterion): ("pass" if c.passed else "fail") for c in self.criteria},
            "failures": sum(c.failures for c in self.criteria),
        }

    def to_json(self) -> Dict[str, Any]:
        data = self.model_dump(mode="json")
        data["criteria"] = sorted(data["criteria"], key=lambda c: c["criterion"])
        data["summary"] = self.summary()
        return data
