import asyncio
import json
from fractions import Fraction

import pytest
from pydantic import ValidationError

from src.errors import InstanceFileError
from src.kernel import prime_field
from src.models import CheckResult, CriterionReport, SelfTestReport, SuitePhase, Verdict, VerdictStatus
from src.models.instances import load_algebra, load_diffeo, load_pl_map, load_unit
from src.persistence.report_store import ReportStore, canonical_json
from src.utils.config import DEFAULT_CONFIG, load_config


def write(path, data):
    path.write_text(data if isinstance(data, str) else json.dumps(data, indent=2))
    return path


# -- configuration ------------------------------------------------------------


def test_defaults_without_a_config_file(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert load_config() == DEFAULT_CONFIG


def test_yaml_is_merged_over_defaults(tmp_path):
    path = write(tmp_path / "c.yaml", "symbolic:\n  depth: 3\nselftest:\n  sizes:\n    kms: 10\n")
    config = load_config(str(path))
    assert config["symbolic"] == {"depth": 3, "max_states": 20000}
    assert config["selftest"]["sizes"]["kms"] == 10
    assert config["selftest"]["sizes"]["lorentz"] == 100
    assert DEFAULT_CONFIG["symbolic"]["depth"] == 8


def test_explicit_missing_config_is_an_error(tmp_path):
    with pytest.raises(InstanceFileError):
        load_config(str(tmp_path / "absent.yaml"))


@pytest.mark.parametrize("text", ["symbolic: [depth: 3\n", "- 1\n- 2\n"])
def test_malformed_config_is_an_instance_file_error(tmp_path, text):
    path = write(tmp_path / "c.yaml", text)
    with pytest.raises(InstanceFileError) as info:
        load_config(str(path))
    assert info.value.details["file"] == str(path)


# -- verdicts and reports -----------------------------------------------------


def test_verdict_payload_must_match_status():
    with pytest.raises(ValidationError):
        Verdict(command="alg sigma", status=VerdictStatus.VERIFIED)
    with pytest.raises(ValidationError):
        Verdict(command="alg sigma", status=VerdictStatus.REFUTED, witness={"u": 1}, counterexample={"v": 2})


@pytest.mark.parametrize("status,code", [("verified", 0), ("refuted", 1), ("unknown", 2), ("error", 2)])
def test_exit_codes(status, code):
    assert VerdictStatus(status).exit_code == code


def test_check_result_names_itself_when_it_has_no_certificate():
    verdict = CheckResult(name="sigma_order", passed=True).to_verdict("alg sigma")
    assert verdict.witness == {"check": "sigma_order"}
    refuted = CheckResult(name="kms", passed=False, details={"n": 1}).to_verdict("modular kms")
    assert refuted.counterexample == {"check": "kms"}
    assert refuted.details == {"n": 1}


def test_unknown_and_error_verdicts():
    assert Verdict.unknown("alg pi0", reason="budget").details == {"reason": "budget"}
    err = Verdict.error("alg pi0", {"code": "x", "message": "m", "details": {}})
    assert err.exit_code == 2
    assert err.details["error"]["code"] == "x"


def test_criterion_keeps_only_the_first_counterexamples():
    c = CriterionReport(criterion=4, name="associativity", phase=SuitePhase.ALGEBRA, instances=10)
    assert c.passed
    for k in range(8):
        c.record_failure({"k": k})
    assert c.failures == 8
    assert [x["k"] for x in c.counterexamples] == [0, 1, 2, 3, 4]
    assert not c.passed
    assert not CriterionReport(criterion=1, name="empty", phase=SuitePhase.ALGEBRA).passed


def test_report_json_sorts_criteria_and_summarizes():
    report = SelfTestReport(seed=7, criteria=[
        CriterionReport(criterion=3, name="b", phase=SuitePhase.ALGEBRA, instances=1),
        CriterionReport(criterion=2, name="a", phase=SuitePhase.ALGEBRA, instances=1, failures=1),
    ])
    data = report.to_json()
    assert [c["criterion"] for c in data["criteria"]] == [2, 3]
    assert data["summary"] == {"passed": False, "criteria": {"2": "fail", "3": "pass"}, "failures": 1}


# -- persistence --------------------------------------------------------------


def test_canonical_json_is_key_order_independent():
    assert canonical_json({"b": 1, "a": [1, {"d": 2, "c": 3}]}) == canonical_json({"a": [1, {"c": 3, "d": 2}], "b": 1})
    assert canonical_json({}).endswith("\n")


def test_report_store_round_trip(tmp_path):
    store = ReportStore(tmp_path)
    target = store.save_sync("out/verdict.json", {"z": 1, "a": 2})
    assert target == tmp_path / "out" / "verdict.json"
    assert target.read_text() == canonical_json({"a": 2, "z": 1})

    async def roundtrip():
        await store.save("async.json", {"k": [1, 2]})
        return await store.load("async.json"), await store.load("missing.json")

    loaded, missing = asyncio.run(roundtrip())
    assert loaded == {"k": [1, 2]}
    assert missing is None


# -- instance files -----------------------------------------------------------


def test_algebra_file_field_overrides_the_cli_field(tmp_path, gauss):
    path = write(tmp_path / "A.json", {"name": "M2", "field": "fp:5", "full": 2})
    algebra = load_algebra(path, gauss)
    assert algebra.field == prime_field(5)
    assert algebra.dim == 4


def test_algebra_generators_are_closed(tmp_path, f5):
    path = write(tmp_path / "A.json", {"generators": [[[1, 0], [0, 0]]]})
    assert load_algebra(path, f5).dim == 2


def test_algebra_file_needs_exactly_one_description(tmp_path, f5):
    path = write(tmp_path / "A.json", {"name": "A", "full": 2, "basis": []})
    with pytest.raises(InstanceFileError) as info:
        load_algebra(path, f5)
    assert "exactly one" in info.value.message
    assert info.value.details["line"] >= 1


def test_invalid_json_reports_its_line(tmp_path, f5):
    path = write(tmp_path / "A.json", '{\n  "full": 2,\n  oops\n}')
    with pytest.raises(InstanceFileError) as info:
        load_algebra(path, f5)
    assert info.value.details["line"] == 3


def test_unit_file_may_hold_bare_rows(tmp_path, f5):
    algebra = load_algebra(write(tmp_path / "A.json", {"full": 2}), f5)
    u = load_unit(write(tmp_path / "u.json", [["1", "1"], ["0", "1"]]), algebra)
    assert u.matrix.to_json() == [["1 mod 5", "1 mod 5"], ["0 mod 5", "1 mod 5"]]


def test_singular_unit_is_reported_against_its_file(tmp_path, f5):
    algebra = load_algebra(write(tmp_path / "A.json", {"full": 2}), f5)
    path = write(tmp_path / "u.json", {"matrix": [[1, 2], [2, 4]]})
    with pytest.raises(InstanceFileError) as info:
        load_unit(path, algebra)
    assert info.value.details["cause"]["code"] == "not_a_unit"


def test_pl_and_diffeo_files(tmp_path):
    unit = {"left": "0", "right": "1"}
    eps = load_pl_map(write(tmp_path / "eps.json", {
        "domain": unit, "codomain": {"left": "0", "right": "2"},
        "breakpoints": ["0", "1/2", "1"], "values": ["0", "1", "2"]}))
    assert eps.breakpoints == (Fraction(0), Fraction(1))

    c = load_diffeo(write(tmp_path / "c.json", {
        "pl": {"domain": unit, "codomain": unit,
               "breakpoints": ["0", "1/4", "1/2", "3/4", "1"], "values": ["0", "1/4", "1/3", "3/4", "1"]}}))
    assert c.collar > 0

    with pytest.raises(InstanceFileError):
        load_pl_map(write(tmp_path / "bad.json", {
            "domain": unit, "codomain": unit, "breakpoints": ["0", "1/2", "1"], "values": ["0", "2/3", "1/2"]}))
