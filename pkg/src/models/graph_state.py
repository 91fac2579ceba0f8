from typing import TypedDict, List, Dict, Any, Optional

from .reports import CriterionReport


class SelfTestState(TypedDict):
    seed: int
    config: Dict[str, Any]
    phases: List[str]
    criteria: List[CriterionReport]
    errors: List[Dict[str, Any]]
    phase: str
    report: Optional[Dict[str, Any]]
    report_path: Optional[str]
    completed: bool
