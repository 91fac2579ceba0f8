import json
import random

import jsonschema
import pytest

from src.errors import ExpressionSyntaxError, ScriptError
from src.kernel import Matrix
from src.symbolic import (
    CORPUS_DIR,
    Hypothesis,
    ONE,
    ProofStatus,
    RewriteSystem,
    atom,
    corpus_scripts,
    diagonal_projection,
    hom_app,
    instantiate,
    inverse,
    normalize,
    parse,
    parse_script,
    product,
    prove_equal,
    replay,
    to_text,
    triangular_model,
    verify_script,
)


@pytest.mark.parametrize("text", ["a b^-1", "(a b)^-1 phi(x)", "phi(psi(a) b)", "1"])
def test_to_text_reparses_to_the_same_expression(text):
    e = parse(text)
    assert parse(to_text(e)) == e


def test_sugar_expands_at_parse_time():
    assert parse("sigma_u(x)") == parse("u^-1 x u")
    assert parse("tr_{u v}(x)") == parse("u v x (u v)^-1")


def test_normalize_pushes_homs_and_inverses_to_atoms():
    assert to_text(normalize(parse("phi(a b)^-1"))) == "phi(b)^-1 phi(a)^-1"
    assert normalize(parse("a b b^-1 a^-1")) == parse("1")


def random_expression(rng: random.Random, depth: int = 4):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice([atom(rng.choice("abc")), ONE])
    kind = rng.choice(["inverse", "product", "hom"])
    if kind == "inverse":
        return inverse(random_expression(rng, depth - 1))
    if kind == "hom":
        return hom_app(rng.choice(["phi", "psi"]), random_expression(rng, depth - 1))
    return product(*(random_expression(rng, depth - 1) for _ in range(rng.randint(2, 3))))


def test_normalize_is_idempotent_and_prints_reparsably():
    rng = random.Random(7)
    for _ in range(300):
        n = normalize(random_expression(rng))
        assert normalize(n) == n
        assert parse(to_text(n)) == n


def test_space_before_parenthesis_is_juxtaposition():
    assert parse("f (x)") == parse("f x")
    assert parse("f (x)", homs=["f"]) == parse("f(x)")


@pytest.mark.parametrize("text,offset", [("a $", 2), ("a (b", 4), ("", 0), ("phi(a", 5)])
def test_syntax_errors_carry_byte_offsets(text, offset):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse(text)
    assert info.value.offset == offset


def test_free_identity_is_proven_without_hypotheses():
    result = prove_equal(parse("sigma_a(sigma_b(x))"), parse("sigma_{b a}(x)"))
    assert result.status == ProofStatus.PROVEN
    assert result.trace == []


def test_hypothesis_step_is_traced_and_replayed():
    h = Hypothesis("h", parse("a b"), parse("c"))
    system = RewriteSystem([h])
    lhs, rhs = parse("a b"), parse("c")
    result = prove_equal(lhs, rhs, system)
    assert result.proven
    assert [step.rule for step in result.trace] == ["h"]
    assert replay(lhs, rhs, system, result.trace)

    tampered = [result.trace[0].model_copy(update={"after": "c"})]
    assert not replay(lhs, rhs, system, tampered)


def test_distinct_free_words_are_refuted_with_normal_forms():
    result = prove_equal(parse("a b"), parse("b a"))
    assert result.status == ProofStatus.REFUTED
    assert result.normal_forms == {"lhs": "a b", "rhs": "b a"}


def test_search_without_applicable_moves_is_unknown():
    system = RewriteSystem([Hypothesis("comm", parse("a b"), parse("b a"))])
    result = prove_equal(parse("a c"), parse("c a"), system, depth=3)
    assert result.status == ProofStatus.UNKNOWN
    assert result.reason == "depth bound"


def test_unbound_replacement_pattern_is_rejected():
    with pytest.raises(ScriptError):
        RewriteSystem([Hypothesis("bad", parse("a"), parse("X a"), patterns=frozenset({"X"}))])


def test_cell_declaration_proves_the_exchange_law():
    report = verify_script(parse_script(
        "symbols a b;\nhoms phi0 phi1;\ncell (a, b): phi0 -> phi1;\n"
        "prove exchange: phi1(a) b^-1 = b^-1 phi0(a);\n"))
    result = report.result("exchange")
    assert result.proven
    assert result.replayed is True


def test_script_warnings_name_unknown_symbols():
    script = parse_script("symbols a;\nprove g: a z = z a;\n", name="warn.nc")
    assert any("unknown symbol 'z'" in w for w in script.warnings)


@pytest.mark.parametrize("text,line", [
    ("frobnicate x;", 1),
    ("symbols a;\nprove g: a = a = a;", 2),
    ("symbols a b;\ncell (a b): f -> g;", 2),
])
def test_script_errors_report_line_and_column(text, line):
    with pytest.raises(ScriptError) as info:
        parse_script(text, name="bad.nc")
    assert info.value.details["line"] == line
    assert str(info.value).startswith(f"bad.nc:{line}:")


def test_variants_must_name_declared_goals():
    with pytest.raises(ScriptError):
        verify_script(parse_script("symbols a;\nprove g: a = a;\nvariants g h;\n"))


def test_corpus_is_shipped():
    names = {path.name for path in corpus_scripts()}
    assert {"exchange.nc", "sigma_order.nc", "horizontal_chain.nc", "interval_assoc.nc"} <= names


@pytest.mark.parametrize("path", corpus_scripts(), ids=lambda p: p.stem)
def test_corpus_goals_are_proven_or_resolved_by_variants(path):
    report = verify_script(path)
    in_variants = {label for group in report.variants for label in group.goals}
    for goal in report.goals:
        if goal.goal not in in_variants:
            assert goal.proven, goal.goal
            assert goal.replayed is True
    for group in report.variants:
        assert len(group.proven) == 1


@pytest.mark.parametrize("script,winner", [
    ("interval_assoc.nc", "bracketing_d"),
    ("quantized_composite.nc", "conclusion"),
    ("horizontal_chain.nc", "conjugator_a"),
])
def test_variant_groups_select_the_intended_reading(script, winner):
    report = verify_script(CORPUS_DIR / script)
    assert report.variants[0].proven == [winner]


def test_stray_symbol_reading_is_refuted():
    report = verify_script(CORPUS_DIR / "interval_assoc.nc")
    assert report.result("bracketing_s").status == ProofStatus.REFUTED


def test_proven_goals_hold_in_both_matrix_models():
    report = verify_script(CORPUS_DIR / "exchange.nc", instantiations=6, rng=random.Random(7))
    soundness = report.soundness["exchange"]
    assert soundness["passed"] is True
    assert soundness["details"]["checked"]["matrix"] == 3
    assert soundness["details"]["checked"]["triangular"] >= 1


def test_triangular_models_include_homs_that_are_not_injective():
    algebra = triangular_model()
    assert algebra.dim == 3
    field = algebra.field
    e12 = Matrix.unit(2, 0, 1, field)
    zero = Matrix(field, 2, 2, [field.zero] * 4)
    assert diagonal_projection().apply_matrix(e12) == zero

    script = parse_script("symbols a;\nhoms phi;\nprove g: phi(a) = phi(a);\n")
    rng = random.Random(7)
    kernels = 0
    for _ in range(20):
        inst = instantiate(script, rng, model="triangular")
        assert all(m.raw(1, 0) == field.zero for m in inst.atoms.values())
        kernels += inst.homs["phi"].apply_matrix(e12) == zero
    assert 0 < kernels < 20


def test_matrix_model_only_uses_automorphisms():
    script = parse_script("symbols a;\nhoms phi;\nprove g: phi(a) = phi(a);\n")
    inst = instantiate(script, random.Random(7))
    e12 = Matrix.unit(2, 0, 1, inst.algebra.field)
    assert inst.homs["phi"].apply_matrix(e12) != Matrix(inst.algebra.field, 2, 2, [inst.algebra.field.zero] * 4)
    with pytest.raises(ScriptError):
        instantiate(script, random.Random(7), model="octonion")


def test_trace_validates_against_schema(schemas_dir):
    schema = json.loads((schemas_dir / "proof_trace.schema.json").read_text())
    report = verify_script(CORPUS_DIR / "horizontal_chain.nc", instantiations=2, rng=random.Random(7))
    jsonschema.validate(report.model_dump(mode="json"), schema)
