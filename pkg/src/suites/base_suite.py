from abc import ABC, abstractmethod
from typing import Any, Dict, Optional
import logging
import random

from ..errors import VerifierError
from ..models.reports import CriterionReport, SuitePhase
from ..utils.config import DEFAULT_CONFIG, section

logger = logging.getLogger(__name__)


class BaseSuite(ABC):
    """One acceptance criterion run as a seeded property sweep.

    Subclasses fill a CriterionReport in ``run``; ``process`` wraps it the way
    a workflow node expects, collecting raised domain errors into the report
    instead of aborting the self-test.
    """

    criterion: int = 0
    name: str = "suite"
    phase: SuitePhase = SuitePhase.ALGEBRA

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        self.config = config or DEFAULT_CONFIG
        selftest = section(self.config, 'selftest')
        self.sizes: Dict[str, int] = {**DEFAULT_CONFIG['selftest']['sizes'], **(selftest.get('sizes') or {})}
        self.height = section(self.config, 'kernel').get('max_sample_height', 3)

    def size(self, key: str) -> int:
        return int(self.sizes[key])

    def rng(self, seed: int) -> random.Random:
        # string seeds hash the same way on every run
        return random.Random(f"{seed}:{self.name}")

    @abstractmethod
    def run(self, report: CriterionReport, rng: random.Random) -> None:
        pass

    def execute(self, seed: int) -> CriterionReport:
        report = CriterionReport(criterion=self.criterion, name=self.name, phase=self.phase)
        self.log_action("starting", {"seed": seed, "sizes": self.sizes})
        try:
            self.run(report, self.rng(seed))
        except VerifierError as e:
            logger.error(f"[{self.__class__.__name__}] aborted: {e.message}")
            report.errors.append(e.to_dict())
        self.log_action(
            f"finished: {report.instances} instances, {report.failures} failures",
            {"statistics": report.statistics},
        )
        return report

    async def process(self, state: Dict[str, Any]) -> Dict[str, Any]:
        report = self.execute(state['seed'])
        state['criteria'].append(report)
        if report.errors:
            state['errors'].extend({"criterion": self.criterion, **error} for error in report.errors)
        return state

    def log_action(self, action: str, details: Optional[Dict[str, Any]] = None):
        logger.info(f"[{self.__class__.__name__}] {action}")
        if details:
            logger.debug(f"Details: {details}")
