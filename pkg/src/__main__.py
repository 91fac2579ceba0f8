#!/usr/bin/env python3
"""
Exact Conjugation Verifier - Main Entry Point
"""
import argparse
import asyncio
import logging
import sys
import time
from typing import List, Optional

from dotenv import load_dotenv
from rich.console import Console
from rich.progress import Progress, SpinnerColumn, TextColumn

from .errors import VerifierError
from .models.verdict import Verdict
from .orchestrator.commands import RunContext, field_from, run_command
from .orchestrator.selftest_workflow import PHASE_ORDER, SelfTestWorkflow
from .persistence.report_store import ReportStore, canonical_json
from .utils.config import load_config, section, setup_logging

load_dotenv()

# stdout carries only JSON; everything human-facing goes to stderr
console = Console(stderr=True)
logger = logging.getLogger(__name__)

EXIT_VERIFIED, EXIT_REFUTED, EXIT_UNKNOWN = 0, 1, 2


class VerifierArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with the ``unknown`` code instead of argparse's default."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        console.print(f"[red]{self.prog}: error: {message}[/red]")
        sys.exit(EXIT_UNKNOWN)


def _add_alg(subparsers) -> None:
    alg = subparsers.add_parser("alg", help="Matrix algebras, homomorphisms and 2-cells")
    commands = alg.add_subparsers(dest="action", required=True, parser_class=VerifierArgumentParser)

    sigma = commands.add_parser("sigma", help="Order law sigma_ab = sigma_b o sigma_a")
    sigma.add_argument("--a", required=True, help="Algebra file")
    sigma.add_argument("--u", help="Unit file; with --v checks one pair instead of the full sweep")
    sigma.add_argument("--v", help="Unit file")

    for name, count, algebras in (("check-two-cell", "one", "ab"), ("vcompose", "two", "ab"),
                                  ("hcompose", "two", "abc"), ("interchange", "four", "abc")):
        p = commands.add_parser(name, help=f"Takes {count} --cell file(s)")
        p.add_argument("--a", required=True, help="Source algebra file")
        p.add_argument("--b", required=len(algebras) == 3, help="Target algebra file (defaults to --a)")
        if len(algebras) == 3:
            p.add_argument("--c", required=True, help="Algebra after --b")
        p.add_argument("--cell", action="append", help="2-cell file (repeatable)")

    pi0 = commands.add_parser("pi0", help="Decide whether two homs are conjugate by a target unit")
    pi0.add_argument("--a", required=True)
    pi0.add_argument("--b")
    pi0.add_argument("--hom0", required=True)
    pi0.add_argument("--hom1", required=True)

    aut = commands.add_parser("aut-check", help="Is (a, b) a 2-cell phi -> phi")
    aut.add_argument("--a", required=True)
    aut.add_argument("--b")
    aut.add_argument("--hom", required=True)
    aut.add_argument("--unit-a", required=True)
    aut.add_argument("--unit-b", required=True)


def _add_interval(subparsers) -> None:
    interval = subparsers.add_parser("interval", help="PL embeddings, interior diffeos and mapping classes")
    commands = interval.add_subparsers(dest="action", required=True, parser_class=VerifierArgumentParser)

    compose = commands.add_parser("compose", help="g o f of two PL maps")
    compose.add_argument("--f", required=True)
    compose.add_argument("--g", required=True)

    transport = commands.add_parser("transport", help="Push an interior diffeo along an embedding")
    transport.add_argument("--c", required=True, help="Diffeo file")
    transport.add_argument("--eps", required=True, help="Embedding file")

    for name in ("cell-check", "hcompose"):
        p = commands.add_parser(name)
        p.add_argument("--cell", action="append", help="Interval 2-cell file (repeatable)")

    cls = commands.add_parser("class", help="Mapping class, or the class homomorphism with --g")
    cls.add_argument("--f", required=True)
    cls.add_argument("--g")

    lorentz = commands.add_parser("lorentz", help="Lorentz flow group law and boundary derivatives")
    lorentz.add_argument("--u", required=True, help="Rational parameter in (-1, 1)")
    lorentz.add_argument("--u2")

    pi0 = commands.add_parser("pi0", help="Are two embeddings connected")
    pi0.add_argument("--eps0", required=True)
    pi0.add_argument("--eps1", required=True)


def _add_fermion(subparsers) -> None:
    fermion = subparsers.add_parser("fermion", help="Clifford quantization of discretized intervals")
    commands = fermion.add_subparsers(dest="action", required=True, parser_class=VerifierArgumentParser)

    def sites(p, required: bool = True) -> None:
        p.add_argument("--resolution", type=int, required=required, help="Mesh 1/r")
        p.add_argument("--interval", default="0,1", help="Endpoints as 'a,b' (default 0,1)")

    sites(commands.add_parser("build", help="The CAR algebra of the interior sites"))

    induce = commands.add_parser("induce", help="Clifford functor on a site-compatible embedding")
    induce.add_argument("--eps", required=True)
    induce.add_argument("--resolution", type=int, required=True)

    witness = commands.add_parser("witness", help="Inner witness of a permutation or diffeo")
    sites(witness)
    source = witness.add_mutually_exclusive_group(required=True)
    source.add_argument("--permutation", help="Site images, e.g. 1,0,2")
    source.add_argument("--diffeo", help="Diffeo file")

    antihom = commands.add_parser("antihom", help="w(a0 o a1) against w(a1) w(a0)")
    sites(antihom)
    antihom.add_argument("--a0", required=True)
    antihom.add_argument("--a1", required=True)

    defects = commands.add_parser("defects", help="Defect table of the witness map")
    sites(defects)
    defects.add_argument("--generators", action="store_true", help="Adjacent transpositions only")

    two = commands.add_parser("two-functor", help="Quantized composite against composite of quantized cells")
    two.add_argument("--resolution", type=int, required=True)
    two.add_argument("--cell", action="append", help="Interval 2-cell file; give two or none")


def _add_modular(subparsers) -> None:
    modular = subparsers.add_parser("modular", help="KMS identity of the modular continuation")
    commands = modular.add_subparsers(dest="action", required=True, parser_class=VerifierArgumentParser)

    kms = commands.add_parser("kms")
    kms.add_argument("--state", required=True, help="Density matrix file over Q(i)")
    kms.add_argument("--samples", type=int, default=20, choices=range(1, 10001), metavar="N")
    kms.add_argument("--convention", choices=["standard", "reversed"], default="standard")

    commands.add_parser("reversed", help="The reversed convention fails KMS on a fixed instance")


def _add_symbolic(subparsers) -> None:
    symbolic = subparsers.add_parser("symbolic", help="Rewrite proofs of word identities")
    commands = symbolic.add_subparsers(dest="action", required=True, parser_class=VerifierArgumentParser)

    prove = commands.add_parser("prove")
    prove.add_argument("script", help="Identity script (.nc)")
    prove.add_argument("--depth", type=int)
    prove.add_argument("--max-states", type=int)
    prove.add_argument("--trace", help="Write the proof trace JSON here")
    prove.add_argument("--instantiations", type=int, default=0, help="Random F_5 models per proven goal")

    normalize = commands.add_parser("normalize")
    normalize.add_argument("expression")


def build_parser() -> VerifierArgumentParser:
    parser = VerifierArgumentParser(
        prog="verifier",
        description="Exact verification of conjugation 2-cells, interval embeddings and their Clifford quantization",
        epilog="""
Examples:
  # Order law over GL_2(F_5)
  verifier --field fp:5 alg sigma --a mat2.json

  # Certify a horizontal composite
  verifier alg hcompose --a A.json --b B.json --c C.json --cell f.json --cell g.json

  # Inner witness of a site swap
  verifier fermion witness --resolution 4 --permutation 1,0,2

  # Prove an identity script and keep the trace
  verifier symbolic prove src/symbolic/corpus/exchange.nc --depth 8 --trace out.json

  # The full acceptance run
  verifier selftest --seed 7 --report selftest_report.json
        """,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--seed", type=int, help="Seed for every random choice (default from config)")
    parser.add_argument("--field", help="gauss or fp:<p> (default gauss; files may declare their own)")
    parser.add_argument("--json-out", help="Also write the verdict JSON to this file")
    parser.add_argument("--timing", action="store_true", help="Record wall time in the verdict")
    parser.add_argument("--config", "-c", help="Path to configuration file")
    parser.add_argument("--log-level", help="Logging level (DEBUG, INFO, WARNING, ERROR)")

    subparsers = parser.add_subparsers(dest="group", required=True, parser_class=VerifierArgumentParser)
    _add_alg(subparsers)
    _add_interval(subparsers)
    _add_fermion(subparsers)
    _add_modular(subparsers)
    _add_symbolic(subparsers)

    selftest = subparsers.add_parser("selftest", help="Run the acceptance suites")
    selftest.add_argument("--phases", help=f"Comma-separated subset of {','.join(p.value for p in PHASE_ORDER)}")
    selftest.add_argument("--report", help="Write the report JSON here as well")
    return parser


def emit(data: dict, json_out: Optional[str], store: ReportStore) -> None:
    sys.stdout.write(canonical_json(data))
    sys.stdout.flush()
    if json_out:
        store.save_sync(json_out, data)


async def run_selftest(args, config: dict, store: ReportStore) -> int:
    phases: Optional[List[str]] = None
    if args.phases:
        phases = [p.strip() for p in args.phases.split(",") if p.strip()]
        unknown = sorted(set(phases) - {p.value for p in PHASE_ORDER})
        if unknown:
            console.print(f"[red]Unknown phases: {', '.join(unknown)}[/red]")
            return EXIT_UNKNOWN

    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console,
        transient=True,
    ) as progress:
        task = progress.add_task("Initializing...", total=None)
        workflow = SelfTestWorkflow(
            config, store=store,
            on_phase=lambda phase: progress.update(task, description=f"Running {phase} suites..."),
        )
        result = await workflow.run(args.seed, phases=phases, report_path=args.report)
        progress.update(task, description="Complete!")

    if not result['success']:
        console.print(f"[red]❌ Self-test failed to run: {result.get('error', 'Unknown error')}[/red]")
        return EXIT_UNKNOWN

    report = result['final_state']['report']
    emit(report, args.json_out, store)
    summary = report['summary']
    if result.get('errors'):
        console.print(f"[yellow]⚠️  {len(result['errors'])} suite errors[/yellow]")
        for error in result['errors'][:3]:
            console.print(f"  - {error.get('message', error)}")
        return EXIT_UNKNOWN
    if summary['passed']:
        console.print("[bold green]✅ All acceptance criteria passed[/bold green]")
        return EXIT_VERIFIED
    failed = [k for k, v in summary['criteria'].items() if v != "pass"]
    console.print(f"[red]❌ Failed criteria: {', '.join(failed)}[/red]")
    return EXIT_REFUTED


async def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config)
    except VerifierError as e:
        setup_logging(args.log_level or "WARNING")
        emit(Verdict.error("config", e.to_dict()).model_dump(mode="json"), None, ReportStore())
        return EXIT_UNKNOWN
    setup_logging(args.log_level or section(config, 'logging').get('level', 'WARNING'))
    if args.seed is None:
        args.seed = section(config, 'selftest').get('seed', 7)
    store = ReportStore()

    if args.group == "selftest":
        if args.field:
            config.setdefault('selftest', {})['field'] = args.field
        return await run_selftest(args, config, store)

    command = f"{args.group} {args.action}"
    started = time.perf_counter()
    try:
        field = field_from(args.field)
        verdict = run_command(command, args, RunContext(seed=args.seed, field=field, config=config, store=store))
    except VerifierError as e:
        verdict = Verdict.error(command, e.to_dict())
    if args.timing:
        verdict.timing_ms = round((time.perf_counter() - started) * 1000, 3)
    logger.info(f"{command}: {verdict.status.value}")
    emit(verdict.model_dump(mode="json"), args.json_out, store)
    return verdict.exit_code


def cli() -> None:
    try:
        sys.exit(asyncio.run(main()))
    except KeyboardInterrupt:
        console.print("\n[yellow]Interrupted by user[/yellow]")
        sys.exit(EXIT_UNKNOWN)


if __name__ == "__main__":
    cli()
