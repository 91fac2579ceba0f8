import asyncio
import json

import jsonschema
import pytest

from src.__main__ import main
from src.symbolic import CORPUS_DIR


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.fixture
def verdict_schema(schemas_dir):
    return json.loads((schemas_dir / "verdict.schema.json").read_text())


@pytest.fixture
def cli(workdir, capsys):
    def run(*argv):
        code = asyncio.run(main(list(argv)))
        out = capsys.readouterr().out
        return code, json.loads(out), out

    return run


def write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def mat2(workdir):
    return write(workdir / "mat2.json", {"name": "M2", "full": 2})


def cell_file(workdir, name, b):
    identity = {"conjugation": [[1, 0], [0, 1]]}
    return write(workdir / name, {"src": identity, "dst": identity, "a": [[1, 0], [0, 1]], "b": b})


def test_sigma_sweep_is_verified(cli, mat2, verdict_schema):
    code, verdict, _ = cli("--field", "fp:3", "alg", "sigma", "--a", mat2)
    assert code == 0
    assert verdict["status"] == "verified"
    assert verdict["command"] == "alg sigma"
    jsonschema.validate(verdict, verdict_schema)


def test_two_cell_verdicts_and_exit_codes(cli, workdir, mat2, verdict_schema):
    central = cell_file(workdir, "central.json", [[2, 0], [0, 2]])
    shear = cell_file(workdir, "shear.json", [[1, 1], [0, 1]])

    code, verdict, _ = cli("--field", "fp:5", "alg", "check-two-cell", "--a", mat2, "--cell", central)
    assert (code, verdict["status"]) == (0, "verified")
    assert verdict["counterexample"] is None

    code, verdict, _ = cli("--field", "fp:5", "alg", "check-two-cell", "--a", mat2, "--cell", shear)
    assert (code, verdict["status"]) == (1, "refuted")
    assert verdict["witness"] is None
    jsonschema.validate(verdict, verdict_schema)


def test_wrong_number_of_cells_is_an_error(cli, workdir, mat2, verdict_schema):
    central = cell_file(workdir, "central.json", [[2, 0], [0, 2]])
    code, verdict, _ = cli("alg", "vcompose", "--a", mat2, "--cell", central)
    assert code == 2
    assert verdict["status"] == "error"
    assert verdict["details"]["error"]["code"] == "instance_file_error"
    jsonschema.validate(verdict, verdict_schema)


def test_symbolic_prove_writes_a_valid_trace(cli, workdir, schemas_dir):
    code, verdict, _ = cli("symbolic", "prove", str(CORPUS_DIR / "exchange.nc"), "--trace", "trace.json")
    assert code == 0
    assert verdict["witness"] == {"proven": ["exchange"]}
    trace = json.loads((workdir / "trace.json").read_text())
    schema = json.loads((schemas_dir / "proof_trace.schema.json").read_text())
    jsonschema.validate(trace, schema)


def test_variant_script_is_verified(cli):
    code, verdict, _ = cli("symbolic", "prove", str(CORPUS_DIR / "interval_assoc.nc"))
    assert code == 0
    assert verdict["details"]["goals"] == {"bracketing_d": "proven", "bracketing_s": "refuted"}


def test_normalize_and_syntax_error(cli, verdict_schema):
    code, verdict, _ = cli("symbolic", "normalize", "sigma_a(x y)")
    assert code == 0
    assert verdict["witness"]["normal_form"] == "a^-1 x y a"

    code, verdict, _ = cli("symbolic", "normalize", "a (b")
    assert code == 2
    assert verdict["details"]["error"]["code"] == "syntax_error"
    jsonschema.validate(verdict, verdict_schema)


def test_fermion_witness_of_a_site_swap(cli, verdict_schema):
    code, verdict, _ = cli("fermion", "witness", "--resolution", "4", "--permutation", "1,0,2")
    assert code == 0
    assert verdict["details"]["samples"] == 20
    jsonschema.validate(verdict, verdict_schema)


def test_fermion_antihom_on_noncommuting_transpositions(cli):
    code, verdict, _ = cli("fermion", "antihom", "--resolution", "4", "--a0", "1,0,2", "--a1", "0,2,1")
    assert code == 0
    assert verdict["details"]["permutations_commute"] is False


def test_lorentz_and_modular_commands(cli, workdir, verdict_schema):
    code, verdict, _ = cli("interval", "lorentz", "--u", "1/2", "--u2", "-1/3")
    assert code == 0
    assert verdict["details"]["trivial_class"] is False
    jsonschema.validate(verdict, verdict_schema)

    state = write(workdir / "rho.json", {"state": [["1/3", "0"], ["0", "2/3"]]})
    code, verdict, _ = cli("modular", "kms", "--state", state, "--samples", "3")
    assert code == 0
    assert verdict["details"]["pairs"] == 3
    assert verdict["details"]["modular_group"] is True

    code, verdict, _ = cli("modular", "kms", "--state", state, "--samples", "3", "--convention", "reversed")
    assert code == 1

    code, verdict, _ = cli("modular", "reversed")
    assert code == 0
    jsonschema.validate(verdict, verdict_schema)


def test_same_seed_gives_identical_bytes(cli, workdir):
    argv = ("--seed", "11", "fermion", "two-functor", "--resolution", "2")
    first = cli(*argv)[2]
    second = cli(*argv)[2]
    assert first == second
    assert json.loads(first)["status"] == "verified"


def test_json_out_matches_stdout(cli, workdir):
    code, _, out = cli("--json-out", "out/verdict.json", "interval", "lorentz", "--u", "1/3")
    assert code == 0
    assert (workdir / "out" / "verdict.json").read_text() == out


def test_timing_is_only_recorded_on_request(cli):
    assert cli("modular", "reversed")[1]["timing_ms"] is None
    assert cli("--timing", "modular", "reversed")[1]["timing_ms"] >= 0


def test_missing_config_gives_an_error_verdict(cli):
    code, verdict, _ = cli("--config", "absent.yaml", "modular", "reversed")
    assert code == 2
    assert verdict["command"] == "config"


@pytest.mark.parametrize("argv", [["alg"], ["fermion", "witness", "--resolution", "4"], ["nonsense"]])
def test_usage_errors_exit_with_two(workdir, argv):
    with pytest.raises(SystemExit) as info:
        asyncio.run(main(argv))
    assert info.value.code == 2


def test_selftest_symbolic_phase(cli, workdir, schemas_dir):
    config = workdir / "small.yaml"
    config.write_text("selftest:\n  sizes:\n    instantiations: 2\n")
    code, report, _ = cli("--config", str(config), "selftest", "--phases", "symbolic", "--report", "r.json")
    assert code == 0
    assert report["summary"] == {"passed": True, "criteria": {"11": "pass"}, "failures": 0}
    assert json.loads((workdir / "r.json").read_text()) == report
    schema = json.loads((schemas_dir / "selftest_report.schema.json").read_text())
    jsonschema.validate(report, schema)


def test_selftest_rejects_unknown_phases(workdir):
    assert asyncio.run(main(["selftest", "--phases", "algebra,bogus"])) == 2
