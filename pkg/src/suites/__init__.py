from typing import Dict, List, Type

from ..models.reports import SuitePhase
from .base_suite import BaseSuite
from .algebra_suites import AssociativitySuite, HorizontalCompositionSuite, Pi0Suite, SigmaOrderSuite
from .interval_suites import IntervalCompositionSuite, MappingClassSuite, TransportSuite
from .quantization_suites import DefectTableSuite, KmsSuite, WitnessSuite
from .symbolic_suite import SymbolicCorpusSuite
from .determinism_suite import DeterminismSuite

ALL_SUITES: List[Type[BaseSuite]] = [
    SigmaOrderSuite, HorizontalCompositionSuite, AssociativitySuite, Pi0Suite,
    TransportSuite, IntervalCompositionSuite, MappingClassSuite,
    WitnessSuite, DefectTableSuite, KmsSuite,
    SymbolicCorpusSuite, DeterminismSuite,
]


def suites_by_phase() -> Dict[SuitePhase, List[Type[BaseSuite]]]:
    phases: Dict[SuitePhase, List[Type[BaseSuite]]] = {phase: [] for phase in SuitePhase}
    for suite in ALL_SUITES:
        phases[suite.phase].append(suite)
    return phases


__all__ = [
    'BaseSuite', 'SigmaOrderSuite', 'HorizontalCompositionSuite', 'AssociativitySuite', 'Pi0Suite',
    'TransportSuite', 'IntervalCompositionSuite', 'MappingClassSuite', 'WitnessSuite', 'DefectTableSuite',
    'KmsSuite', 'SymbolicCorpusSuite', 'DeterminismSuite', 'ALL_SUITES', 'suites_by_phase',
]
