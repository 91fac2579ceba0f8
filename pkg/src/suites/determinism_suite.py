import copy
import json
import logging
import random
from typing import Any, Dict, Optional, Sequence, Type

from ..models.reports import CriterionReport, SuitePhase
from .algebra_suites import HorizontalCompositionSuite, Pi0Suite
from .base_suite import BaseSuite
from .interval_suites import TransportSuite
from .quantization_suites import KmsSuite

logger = logging.getLogger(__name__)

PROBE_SIZE = 20


def canonical(report: CriterionReport) -> str:
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))


class DeterminismSuite(BaseSuite):
    """Rerun reduced copies of other suites under the same seed and demand identical reports."""

    criterion = 12
    name = "determinism"
    phase = SuitePhase.DETERMINISM

    def __init__(self, config: Optional[Dict[str, Any]] = None,
                 probes: Sequence[Type[BaseSuite]] = (HorizontalCompositionSuite, Pi0Suite, TransportSuite, KmsSuite)):
        super().__init__(config)
        self.probes = list(probes)
        self.seed: Optional[int] = None

    def _probe_config(self) -> Dict[str, Any]:
        config = copy.deepcopy(self.config)
        config.setdefault('selftest', {})['sizes'] = {key: min(int(value), PROBE_SIZE)
                                                     for key, value in self.sizes.items()}
        return config

    def execute(self, seed: int) -> CriterionReport:
        self.seed = seed
        return super().execute(seed)

    def run(self, report: CriterionReport, rng: random.Random) -> None:
        config = self._probe_config()
        for probe in self.probes:
            first = canonical(probe(config).execute(self.seed))
            second = canonical(probe(config).execute(self.seed))
            report.instances += 1
            if first != second:
                report.record_failure({"suite": probe.name, "first": first, "second": second})
            else:
                report.statistics[probe.name] = len(first)
        report.notes.append(f"each probe ran twice at size {PROBE_SIZE}")
