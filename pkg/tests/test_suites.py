import asyncio
import copy
import json

import jsonschema
import pytest

from src.errors import VerifierError
from src.models.reports import SuitePhase
from src.orchestrator.selftest_workflow import PHASE_ORDER, SelfTestWorkflow
from src.persistence.report_store import ReportStore
from src.suites import ALL_SUITES, BaseSuite, DeterminismSuite, SigmaOrderSuite, suites_by_phase
from src.utils.config import DEFAULT_CONFIG

SEED = 7


@pytest.fixture
def small_config():
    config = copy.deepcopy(DEFAULT_CONFIG)
    config['selftest']['field'] = 'fp:3'
    config['selftest']['sizes'] = {key: 3 for key in config['selftest']['sizes']}
    config['selftest']['sizes']['instantiations'] = 2
    return config


def test_every_criterion_has_exactly_one_suite():
    assert sorted(suite.criterion for suite in ALL_SUITES) == list(range(1, 13))
    phases = suites_by_phase()
    assert set(phases) == set(PHASE_ORDER)
    assert sum(len(v) for v in phases.values()) == len(ALL_SUITES)


@pytest.mark.parametrize("suite_class", [s for s in ALL_SUITES if s is not DeterminismSuite],
                         ids=lambda s: s.name)
def test_suite_passes_at_small_sizes(suite_class, small_config):
    report = suite_class(small_config).execute(SEED)
    assert report.criterion == suite_class.criterion
    assert report.errors == []
    assert report.failures == 0, report.counterexamples
    assert report.passed


def test_sigma_sweep_covers_all_pairs_of_units(small_config):
    report = SigmaOrderSuite(small_config).execute(SEED)
    assert report.statistics["units"] == 48
    assert report.instances == 48 * 48


def test_determinism_probe_reruns_agree(small_config):
    report = DeterminismSuite(small_config).execute(SEED)
    assert report.passed
    assert report.instances == 4


def test_domain_errors_are_collected_not_raised(small_config):
    class Broken(BaseSuite):
        criterion = 99
        name = "broken"

        def run(self, report, rng):
            report.instances += 1
            raise VerifierError("boom", {"where": "run"})

    state = {'seed': SEED, 'criteria': [], 'errors': []}
    state = asyncio.run(Broken(small_config).process(state))
    assert state['criteria'][0].errors[0]["message"] == "boom"
    assert state['errors'] == [{"criterion": 99, "code": "verifier_error", "message": "boom",
                                "details": {"where": "run"}}]
    assert not state['criteria'][0].passed


def test_workflow_runs_selected_phases_and_saves(small_config, tmp_path, schemas_dir):
    phases = []
    workflow = SelfTestWorkflow(small_config, store=ReportStore(tmp_path), on_phase=phases.append)
    result = asyncio.run(workflow.run(SEED, phases=["algebra", "symbolic"], report_path="report.json"))

    assert result["success"]
    assert result["errors"] == []
    assert phases == ["algebra", "symbolic"]
    report = result["final_state"]["report"]
    assert [c["criterion"] for c in report["criteria"]] == [1, 2, 3, 4, 11]
    assert report["summary"]["passed"]
    assert report["field"] == "fp:3"
    assert json.loads((tmp_path / "report.json").read_text()) == report

    schema = json.loads((schemas_dir / "selftest_report.schema.json").read_text())
    jsonschema.validate(report, schema)


@pytest.mark.slow
def test_full_selftest_is_reproducible(small_config, tmp_path):
    def run_once():
        workflow = SelfTestWorkflow(small_config, store=ReportStore(tmp_path))
        return asyncio.run(workflow.run(SEED))["final_state"]["report"]

    first, second = run_once(), run_once()
    assert first == second
    assert first["summary"]["passed"]
    assert {c["phase"] for c in first["criteria"]} == {phase.value for phase in SuitePhase}
