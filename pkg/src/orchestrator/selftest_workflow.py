from typing import Any, Callable, Dict, List, Optional, Sequence
from langgraph.graph import StateGraph, END
from ..models.graph_state import SelfTestState
from ..models.reports import SelfTestReport, SuitePhase
from ..persistence.report_store import ReportStore
from ..suites import suites_by_phase
from ..utils.config import section
import logging

logger = logging.getLogger(__name__)

PHASE_ORDER = [
    SuitePhase.ALGEBRA,
    SuitePhase.INTERVAL,
    SuitePhase.QUANTIZATION,
    SuitePhase.MODULAR,
    SuitePhase.SYMBOLIC,
    SuitePhase.DETERMINISM,
]


class SelfTestWorkflow:
    """Runs the acceptance suites phase by phase and assembles the self-test report."""

    def __init__(self, config: Dict[str, Any], store: Optional[ReportStore] = None,
                 on_phase: Optional[Callable[[str], None]] = None):
        self.config = config
        self.store = store or ReportStore()
        self.on_phase = on_phase
        self.suites = suites_by_phase()
        self.graph = self._build_graph()

    def _build_graph(self) -> StateGraph:
        graph = StateGraph(SelfTestState)

        for phase in PHASE_ORDER:
            graph.add_node(phase.value, self._phase_node(phase))
        graph.add_node("assemble_report", self._assemble_report)
        graph.add_node("save_report", self._save_report)

        for current, following in zip(PHASE_ORDER, PHASE_ORDER[1:]):
            graph.add_edge(current.value, following.value)
        graph.add_edge(PHASE_ORDER[-1].value, "assemble_report")
        graph.add_edge("assemble_report", "save_report")
        graph.add_edge("save_report", END)

        graph.set_entry_point(PHASE_ORDER[0].value)

        return graph.compile()

    def _phase_node(self, phase: SuitePhase):
        async def run_phase(state: SelfTestState) -> SelfTestState:
            if phase.value not in state['phases']:
                logger.info(f"Skipping {phase.value} phase")
                return state
            logger.info(f"Starting {phase.value} phase...")
            if self.on_phase:
                self.on_phase(phase.value)
            for suite_class in self.suites[phase]:
                state = await suite_class(state['config']).process(state)
            state['phase'] = f"{phase.value}_complete"
            return state

        return run_phase

    async def _assemble_report(self, state: SelfTestState) -> SelfTestState:
        report = SelfTestReport(
            seed=state['seed'],
            field=section(state['config'], 'selftest').get('field'),
            sizes=section(state['config'], 'selftest').get('sizes', {}),
            criteria=state['criteria'],
        )
        state['report'] = report.to_json()
        summary = report.summary()
        logger.info(f"Self-test {'passed' if summary['passed'] else 'failed'}: {summary['criteria']}")
        return state

    async def _save_report(self, state: SelfTestState) -> SelfTestState:
        if state.get('report_path'):
            await self.store.save(state['report_path'], state['report'])
        state['phase'] = 'complete'
        state['completed'] = True
        return state

    def _create_initial_state(self, seed: int, phases: Sequence[str], report_path: Optional[str]) -> SelfTestState:
        return {
            'seed': seed,
            'config': self.config,
            'phases': list(phases),
            'criteria': [],
            'errors': [],
            'phase': 'starting',
            'report': None,
            'report_path': report_path,
            'completed': False,
        }

    async def run(self, seed: int, phases: Optional[Sequence[str]] = None,
                  report_path: Optional[str] = None) -> Dict[str, Any]:
        """Run the selected phases (all of them by default) under ``seed``."""
        selected: List[str] = list(phases) if phases else [phase.value for phase in PHASE_ORDER]
        initial_state = self._create_initial_state(seed, selected, report_path)
        try:
            final_state = await self.graph.ainvoke(initial_state)
            return {
                "success": True,
                "final_state": final_state,
                "errors": final_state.get('errors', []),
            }
        except Exception as e:
            logger.error(f"Self-test workflow failed: {e}")
            return {
                "success": False,
                "error": str(e),
                "final_state": initial_state,
            }
