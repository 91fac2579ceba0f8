"""
Handlers behind the CLI subcommands.

Each handler reads its instance files, runs one exact check and returns a
Verdict. Certification failures are refutations and come back as values;
every other domain error propagates to the dispatcher, which reports it as
an ``error`` verdict with exit code 2.
"""
import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from ..algebra import SigmaTable, compose_sigma_check, enumerate_units
from ..errors import CertificationError, CoherenceViolation, InstanceFileError, VerifierError
from ..groupoid import (
    aut_check,
    check_two_cell,
    conjugating_unit,
    hcompose,
    interchange_probe,
    intertwiner_space,
    vcompose,
)
from ..interval import (
    Interval,
    check_interval_two_cell,
    class_compose,
    class_equal,
    interval_hcompose,
    lorentz,
    lorentz_flow_check,
    mapping_class,
    pi0_emb,
    pl_compose,
    transport_square,
)
from ..interval.pl import fmt
from ..kernel import GAUSS, Matrix, ScalarField, get_field
from ..models.instances import (
    load_algebra,
    load_cell,
    load_diffeo,
    load_hom,
    load_interval_square,
    load_pl_map,
    load_state,
    load_unit,
)
from ..models.verdict import CheckResult, Verdict, VerdictStatus
from ..persistence.report_store import ReportStore
from ..quantization import (
    ModularData,
    SitePermutation,
    SiteSet,
    all_permutations,
    antihom_check,
    bogoliubov,
    defect_table,
    induced_hom,
    inner_witness,
    kms_check,
    modular_group_check,
    permutation_witness,
    quantize,
    reversed_convention_counterexample,
    two_functor_check,
    witness_sample,
)
from ..symbolic import normalize, parse, to_text, verify_script
from ..utils.config import section
from ..utils.sampling import random_discrete_cell, random_gauss_matrix

logger = logging.getLogger(__name__)

WITNESS_SAMPLES = 20


@dataclass
class RunContext:
    seed: int
    field: ScalarField
    config: Dict[str, Any]
    store: ReportStore

    def rng(self, name: str) -> random.Random:
        return random.Random(f"{self.seed}:{name}")

    def option(self, section_name: str, key: str, default: Any) -> Any:
        return section(self.config, section_name).get(key, default)


Handler = Callable[[Any, RunContext], Verdict]


def refuted(command: str, exc: VerifierError) -> Verdict:
    counterexample = exc.details.get("counterexample", exc.details) or {"reason": exc.message}
    return Verdict(command=command, status=VerdictStatus.REFUTED, counterexample=counterexample,
                   details={"code": exc.code, "message": exc.message})


def verified(command: str, witness: Dict[str, Any], **details: Any) -> Verdict:
    return Verdict(command=command, status=VerdictStatus.VERIFIED, witness=witness, details=details)


def _algebras(args: Any, ctx: RunContext, names: List[str]):
    cap = ctx.option('algebra', 'closure_cap', 4096)
    loaded = []
    for name in names:
        path = getattr(args, name, None)
        loaded.append(load_algebra(path, ctx.field, cap) if path else loaded[-1])
    return loaded


def _cells(args: Any, count: int) -> List[str]:
    cells = args.cell or []
    if len(cells) != count:
        raise InstanceFileError(f"expected {count} --cell files, got {len(cells)}", {"file": None})
    return cells


def _certified(command: str, phi0, phi1, a, b) -> Verdict:
    try:
        cell = check_two_cell(phi0, phi1, a, b)
    except (CertificationError, CoherenceViolation) as e:
        return refuted(command, e)
    return verified(command, {"cell": cell.to_json()})


# -- alg ---------------------------------------------------------------------------


def alg_sigma(args: Any, ctx: RunContext) -> Verdict:
    (A,) = _algebras(args, ctx, ["a"])
    if args.u and args.v:
        return compose_sigma_check(load_unit(args.u, A), load_unit(args.v, A)).to_verdict("alg sigma")
    limit = ctx.option('groupoid', 'enumeration_limit', 4096)
    units = list(enumerate_units(A, limit=limit))
    return SigmaTable(A, units).order_law_sweep().to_verdict("alg sigma")


def alg_check_two_cell(args: Any, ctx: RunContext) -> Verdict:
    A, B = _algebras(args, ctx, ["a", "b"])
    (path,) = _cells(args, 1)
    return _certified("alg check-two-cell", *load_cell(path, A, B))


def alg_vcompose(args: Any, ctx: RunContext) -> Verdict:
    A, B = _algebras(args, ctx, ["a", "b"])
    first, second = _cells(args, 2)
    try:
        f = check_two_cell(*load_cell(first, A, B))
        g = check_two_cell(*load_cell(second, A, B))
        composite = vcompose(f, g)
    except (CertificationError, CoherenceViolation) as e:
        return refuted("alg vcompose", e)
    return verified("alg vcompose", {"composite": composite.to_json()})


def alg_hcompose(args: Any, ctx: RunContext) -> Verdict:
    A, B, C = _algebras(args, ctx, ["a", "b", "c"])
    first, second = _cells(args, 2)
    try:
        f = check_two_cell(*load_cell(first, A, B))
        g = check_two_cell(*load_cell(second, B, C))
        composite = hcompose(f, g)
    except (CertificationError, CoherenceViolation) as e:
        return refuted("alg hcompose", e)
    return verified("alg hcompose", {"composite": composite.to_json()})


def alg_interchange(args: Any, ctx: RunContext) -> Verdict:
    A, B, C = _algebras(args, ctx, ["a", "b", "c"])
    paths = _cells(args, 4)
    try:
        f0, f1 = (check_two_cell(*load_cell(p, A, B)) for p in paths[:2])
        g0, g1 = (check_two_cell(*load_cell(p, B, C)) for p in paths[2:])
        return interchange_probe((f0, f1, g0, g1)).to_verdict("alg interchange")
    except (CertificationError, CoherenceViolation) as e:
        return refuted("alg interchange", e)


def alg_pi0(args: Any, ctx: RunContext) -> Verdict:
    A, B = _algebras(args, ctx, ["a", "b"])
    phi0, phi1 = load_hom(args.hom0, A, B), load_hom(args.hom1, A, B)
    attempts = ctx.option('groupoid', 'unit_search_attempts', 64)
    limit = ctx.option('groupoid', 'enumeration_limit', 4096)
    solutions = intertwiner_space(phi0, phi1)
    found = conjugating_unit(phi0, phi1, rng=ctx.rng("pi0"), attempts=attempts, enumeration_limit=limit)
    details = {"intertwiner_dim": len(solutions)}
    if found is not None:
        return verified("alg pi0", {"unit": found.unit.to_json(), "cell": found.cell.to_json()}, **details)
    field = B.field
    exhaustive = field.is_finite and field.modulus ** len(solutions) <= limit
    if not solutions or exhaustive:
        return Verdict(command="alg pi0", status=VerdictStatus.REFUTED, details=details,
                       counterexample={"reason": "no unit conjugates hom1 to hom0",
                                       "exhaustive": bool(exhaustive)})
    return Verdict.unknown("alg pi0", reason="no invertible intertwiner found by the search", **details)


def alg_aut_check(args: Any, ctx: RunContext) -> Verdict:
    A, B = _algebras(args, ctx, ["a", "b"])
    phi = load_hom(args.hom, A, B)
    try:
        return aut_check(phi, load_unit(args.unit_a, A), load_unit(args.unit_b, B)).to_verdict("alg aut-check")
    except CoherenceViolation as e:
        return refuted("alg aut-check", e)


# -- interval ----------------------------------------------------------------------


def interval_compose(args: Any, ctx: RunContext) -> Verdict:
    f, g = load_pl_map(args.f), load_pl_map(args.g)
    return verified("interval compose", {"composite": pl_compose(f, g).to_json()})


def interval_transport(args: Any, ctx: RunContext) -> Verdict:
    c, eps = load_diffeo(args.c), load_pl_map(args.eps)
    pushed, point = transport_square(c, eps)
    if point is not None:
        return Verdict(command="interval transport", status=VerdictStatus.REFUTED,
                       counterexample={"point": fmt(point), "pushed": pushed.to_json()})
    return verified("interval transport", {"pushed": pushed.to_json()}, collar=fmt(pushed.collar))


def interval_cell_check(args: Any, ctx: RunContext) -> Verdict:
    (path,) = _cells(args, 1)
    try:
        cell = check_interval_two_cell(*load_interval_square(path))
    except CertificationError as e:
        return refuted("interval cell-check", e)
    return verified("interval cell-check", {"cell": cell.to_json()})


def interval_hcompose_cmd(args: Any, ctx: RunContext) -> Verdict:
    first, second = _cells(args, 2)
    try:
        f = check_interval_two_cell(*load_interval_square(first))
        g = check_interval_two_cell(*load_interval_square(second))
        composite = interval_hcompose(f, g)
    except (CertificationError, CoherenceViolation) as e:
        return refuted("interval hcompose", e)
    return verified("interval hcompose", {"composite": composite.to_json()})


def interval_class(args: Any, ctx: RunContext) -> Verdict:
    f = load_pl_map(args.f)
    cls = mapping_class(f)
    if not args.g:
        return verified("interval class", {"class": cls.to_json()}, trivial=cls.is_identity())
    g = load_pl_map(args.g)
    composite = mapping_class(pl_compose(f, g))
    product = class_compose(cls, mapping_class(g))
    result = CheckResult(name="class_homomorphism", passed=class_equal(composite, product),
                         witness={"class": composite.to_json()},
                         counterexample={"composite": composite.to_json(), "product": product.to_json()})
    if result.passed:
        result.counterexample = None
    else:
        result.witness = None
    return result.to_verdict("interval class")


def interval_lorentz(args: Any, ctx: RunContext) -> Verdict:
    u2 = args.u2 if args.u2 is not None else args.u
    result = lorentz_flow_check(args.u, u2)
    result.details["trivial_class"] = mapping_class(lorentz(args.u)).is_identity()
    result.details["derivative_at_1"] = fmt(lorentz(args.u).derivative(1))
    return result.to_verdict("interval lorentz")


def interval_pi0(args: Any, ctx: RunContext) -> Verdict:
    comparison = pi0_emb(load_pl_map(args.eps0), load_pl_map(args.eps1))
    if comparison.equivalent:
        return verified("interval pi0", {"cell": comparison.cell.to_json()}, reason=comparison.reason)
    return Verdict(command="interval pi0", status=VerdictStatus.REFUTED,
                   counterexample={"reason": comparison.reason})


# -- fermion -----------------------------------------------------------------------


def _interval(text: str) -> Interval:
    try:
        left, right = (part.strip() for part in text.split(","))
    except ValueError as exc:
        raise InstanceFileError(f"--interval expects 'a,b', got {text!r}", {"file": None}) from exc
    return Interval(left=left, right=right, label="I")


def _sites(args: Any) -> SiteSet:
    return SiteSet(interval=_interval(args.interval), resolution=args.resolution)


def _permutation(sites: SiteSet, text: str) -> SitePermutation:
    try:
        images = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise InstanceFileError(f"permutation {text!r} is not a list of site indices", {"file": None}) from exc
    return SitePermutation(sites=sites, images=images)


def _site_cap(ctx: RunContext) -> int:
    return ctx.option('quantization', 'site_cap', 6)


def fermion_build(args: Any, ctx: RunContext) -> Verdict:
    car = quantize(_interval(args.interval), args.resolution, _site_cap(ctx))
    return verified("fermion build", {"algebra": car.to_json()})


def fermion_induce(args: Any, ctx: RunContext) -> Verdict:
    hom = induced_hom(load_pl_map(args.eps), args.resolution, _site_cap(ctx))
    return verified("fermion induce", {"hom": hom.to_json()})


def fermion_witness(args: Any, ctx: RunContext) -> Verdict:
    cap = _site_cap(ctx)
    if args.diffeo:
        witness = inner_witness(bogoliubov(load_diffeo(args.diffeo), args.resolution, cap))
    else:
        witness = permutation_witness(_permutation(_sites(args), args.permutation), cap)
    sample = witness_sample(witness, ctx.rng("witness"), samples=WITNESS_SAMPLES, height=1)
    if not sample.passed:
        return sample.to_verdict("fermion witness")
    return verified("fermion witness", {"witness": witness.to_json()}, samples=WITNESS_SAMPLES)


def fermion_antihom(args: Any, ctx: RunContext) -> Verdict:
    sites = _sites(args)
    return antihom_check(_permutation(sites, args.a0), _permutation(sites, args.a1),
                         _site_cap(ctx)).to_verdict("fermion antihom")


def fermion_defects(args: Any, ctx: RunContext) -> Verdict:
    sites = _sites(args)
    if args.generators:
        permutations = [SitePermutation.transposition(sites, i, i + 1) for i in range(sites.count - 1)]
    else:
        permutations = list(all_permutations(sites))
    return defect_table(permutations, _site_cap(ctx)).to_verdict("fermion defects")


def fermion_two_functor(args: Any, ctx: RunContext) -> Verdict:
    cap = _site_cap(ctx)
    if args.cell:
        first, second = _cells(args, 2)
        try:
            f = check_interval_two_cell(*load_interval_square(first))
            g = check_interval_two_cell(*load_interval_square(second))
        except CertificationError as e:
            return refuted("fermion two-functor", e)
        return two_functor_check(f, g, resolution=args.resolution, site_cap=cap).to_verdict("fermion two-functor")
    # a seeded random composable pair I -> J -> K at mesh 1/r
    rng = ctx.rng("two-functor")
    r = args.resolution
    I = SiteSet(interval=Interval(left=0, right=1, label="I"), resolution=r)
    J = SiteSet(interval=Interval(left=0, right=f"{r + 1}/{r}", label="J"), resolution=r + 1)
    K = SiteSet(interval=Interval(left=0, right=f"{r + 1}/{r}", label="K"), resolution=r + 1)
    f, g = random_discrete_cell(I, J, rng), random_discrete_cell(J, K, rng)
    result = two_functor_check(f, g, site_cap=cap)
    result.details["cells"] = {"f": f.to_json(), "g": g.to_json()}
    return result.to_verdict("fermion two-functor")


# -- modular -----------------------------------------------------------------------


def modular_kms(args: Any, ctx: RunContext) -> Verdict:
    spec = load_state(args.state, GAUSS)
    d = ModularData(state=Matrix.from_json(spec.state, GAUSS))
    n = d.size
    if spec.x is not None and spec.y is not None:
        pairs = [(Matrix.from_json(spec.x, GAUSS), Matrix.from_json(spec.y, GAUSS))]
    else:
        rng = ctx.rng("kms")
        pairs = [(random_gauss_matrix(n, rng), random_gauss_matrix(n, rng)) for _ in range(args.samples)]
    for k, (x, y) in enumerate(pairs):
        result = kms_check(d, x, y, convention=args.convention)
        if not result.passed:
            result.counterexample = {"pair": k, **(result.counterexample or {})}
            return result.to_verdict("modular kms")
    group = modular_group_check(d, pairs[0][0], 1, -1)
    return verified("modular kms", {"inner_unit": result.witness["inner_unit"]},
                    pairs=len(pairs), convention=args.convention, modular_group=group.passed)


def modular_reversed(args: Any, ctx: RunContext) -> Verdict:
    result = reversed_convention_counterexample()
    if result.passed:
        return Verdict(command="modular reversed", status=VerdictStatus.REFUTED,
                       counterexample={"reason": "reversed convention satisfied KMS", **result.details})
    return verified("modular reversed", {"counterexample": result.counterexample})


# -- symbolic ----------------------------------------------------------------------


def symbolic_prove(args: Any, ctx: RunContext) -> Verdict:
    depth = args.depth if args.depth is not None else ctx.option('symbolic', 'depth', 8)
    max_states = args.max_states or ctx.option('symbolic', 'max_states', 20000)
    report = verify_script(args.script, depth=depth, max_states=max_states,
                           instantiations=args.instantiations, rng=ctx.rng("symbolic"))
    trace = report.model_dump(mode="json")
    if args.trace:
        ctx.store.save_sync(args.trace, trace)

    in_variants = {label for group in report.variants for label in group.goals}
    required = [g for g in report.goals if g.goal not in in_variants]
    statuses = {g.goal: g.status.value for g in report.goals}
    unsound = [label for label, check in report.soundness.items() if not check["passed"]]
    bad_variants = [group.goals for group in report.variants if len(group.proven) != 1]
    details = {"script": report.script, "depth": depth, "goals": statuses,
               "trace_file": str(args.trace) if args.trace else None}
    refuted_goals = [g.goal for g in required if g.status.value == "refuted"]
    if refuted_goals or unsound or bad_variants or any(g.proven and not g.replayed for g in report.goals):
        return Verdict(command="symbolic prove", status=VerdictStatus.REFUTED, details=details,
                       counterexample={"refuted": refuted_goals, "unsound": unsound, "variants": bad_variants})
    if all(g.proven for g in required):
        return verified("symbolic prove", {"proven": [g.goal for g in report.goals if g.proven]}, **details)
    return Verdict.unknown("symbolic prove", **details)


def symbolic_normalize(args: Any, ctx: RunContext) -> Verdict:
    expression = parse(args.expression)
    return verified("symbolic normalize", {"normal_form": to_text(normalize(expression))},
                    input=to_text(expression))


HANDLERS: Dict[str, Handler] = {
    "alg sigma": alg_sigma,
    "alg check-two-cell": alg_check_two_cell,
    "alg vcompose": alg_vcompose,
    "alg hcompose": alg_hcompose,
    "alg interchange": alg_interchange,
    "alg pi0": alg_pi0,
    "alg aut-check": alg_aut_check,
    "interval compose": interval_compose,
    "interval transport": interval_transport,
    "interval cell-check": interval_cell_check,
    "interval hcompose": interval_hcompose_cmd,
    "interval class": interval_class,
    "interval lorentz": interval_lorentz,
    "interval pi0": interval_pi0,
    "fermion build": fermion_build,
    "fermion induce": fermion_induce,
    "fermion witness": fermion_witness,
    "fermion antihom": fermion_antihom,
    "fermion defects": fermion_defects,
    "fermion two-functor": fermion_two_functor,
    "modular kms": modular_kms,
    "modular reversed": modular_reversed,
    "symbolic prove": symbolic_prove,
    "symbolic normalize": symbolic_normalize,
}


def run_command(command: str, args: Any, ctx: RunContext) -> Verdict:
    """Dispatch to a handler, turning domain errors into an error verdict."""
    handler = HANDLERS[command]
    try:
        return handler(args, ctx)
    except (CertificationError, CoherenceViolation) as e:
        logger.info(f"{command}: {e.message}")
        return refuted(command, e)
    except VerifierError as e:
        logger.error(f"{command} failed: {e.message}")
        return Verdict.error(command, e.to_dict())


def field_from(descriptor: Optional[str]) -> ScalarField:
    return get_field(descriptor or "gauss")


def default_report_path(config: Dict[str, Any]) -> Path:
    return Path(section(config, 'output').get('report_path', 'selftest_report.json'))
