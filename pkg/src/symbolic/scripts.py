"""
Identity scripts: declarations, hypotheses and goals, verified in one batch.

    # comments run to the end of the line
    symbols a b0 b1 c x;
    homs phi0 phi1;
    vars X;
    cell (a, b0): phi0 -> phi1;
    assume h1: b0 eps0 = eps1 a;
    assume h2: X c = c X <->;
    prove g1: phi1(a) b0^-1 = b0^-1 phi0(a);
    variants g1 g2;

``cell (a, b): phi0 -> phi1`` adds the commutation rule
phi1(a) b^-1 phi0(X) -> phi1(X) phi1(a) b^-1 for a fresh pattern X and records
the cell for the matrix instantiation. ``variants`` groups competing readings
of one identity so the report names the ones that were proven.
"""
from __future__ import annotations

import logging
import random
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, Field

from ..errors import ExpressionSyntaxError, ScriptError
from .expressions import Atom, Expression, hom_app, inverse, product
from .instantiate import soundness_check
from .parser import ExpressionParser
from .rewriting import (
    DEFAULT_DEPTH,
    DEFAULT_MAX_STATES,
    Direction,
    Hypothesis,
    ProofResult,
    RewriteSystem,
    prove_equal,
    replay,
)

logger = logging.getLogger(__name__)

CELL_PATTERN = "_"
_IDENT = r"[A-Za-z][A-Za-z0-9_']*"
_LABEL = re.compile(rf"\s*(?P<label>{_IDENT})\s*:(?!\s*$)")
_CELL = re.compile(
    rf"\(\s*(?P<a>{_IDENT})\s*,\s*(?P<b>{_IDENT})\s*\)\s*:\s*(?P<src>{_IDENT})\s*->\s*(?P<dst>{_IDENT})\s*$"
)
_DIRECTION = re.compile(r"(?P<body>.*?)\s*(?P<arrow><->|->|<-)\s*$", re.S)


@dataclass(frozen=True)
class CellDeclaration:
    label: str
    a: str
    b: str
    src: str
    dst: str

    def hypothesis(self) -> Hypothesis:
        x = Atom(CELL_PATTERN)
        conjugator = product(hom_app(self.dst, Atom(self.a)), inverse(Atom(self.b)))
        return Hypothesis(
            label=self.label,
            lhs=product(conjugator, hom_app(self.src, x)),
            rhs=product(hom_app(self.dst, x), conjugator),
            patterns=frozenset({CELL_PATTERN}),
        )


@dataclass(frozen=True)
class Goal:
    label: str
    lhs: Expression
    rhs: Expression


@dataclass
class Script:
    name: str = "<script>"
    symbols: List[str] = field(default_factory=list)
    homs: List[str] = field(default_factory=list)
    patterns: List[str] = field(default_factory=list)
    cells: List[CellDeclaration] = field(default_factory=list)
    assumptions: List[Hypothesis] = field(default_factory=list)
    goals: List[Goal] = field(default_factory=list)
    variants: List[List[str]] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def hypotheses(self) -> List[Hypothesis]:
        return [cell.hypothesis() for cell in self.cells] + self.assumptions

    def rewrite_system(self) -> RewriteSystem:
        return RewriteSystem(self.hypotheses)


class VariantReport(BaseModel):
    goals: List[str]
    proven: List[str] = Field(description="Members of the group that were proven")


class ScriptReport(BaseModel):
    script: str
    hypotheses: List[str] = Field(default_factory=list)
    goals: List[ProofResult] = Field(default_factory=list)
    variants: List[VariantReport] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)
    soundness: Dict[str, Dict[str, Any]] = Field(default_factory=dict)

    @property
    def all_proven(self) -> bool:
        return all(g.proven for g in self.goals)

    def result(self, label: str) -> ProofResult:
        return next(g for g in self.goals if g.goal == label)


# -- parsing ------------------------------------------------------------------


def _position(text: str, index: int) -> Tuple[int, int]:
    line = text.count("\n", 0, index) + 1
    column = index - (text.rfind("\n", 0, index) + 1) + 1
    return line, column


def _statements(text: str) -> List[Tuple[int, str]]:
    """(start index, statement text) pairs, with comments blanked out in place."""
    clean = re.sub(r"#[^\n]*", lambda m: " " * len(m.group(0)), text)
    statements = []
    start = 0
    for m in re.finditer(";", clean):
        statements.append((start, clean[start:m.start()]))
        start = m.end()
    if clean[start:].strip():
        statements.append((start, clean[start:]))
    return [(s, body) for s, body in statements if body.strip()]


class ScriptParser:
    def __init__(self, text: str, name: str = "<script>"):
        self.text = text
        self.script = Script(name=name)

    def error(self, message: str, index: int) -> ScriptError:
        line, column = _position(self.text, index)
        return ScriptError(f"{self.script.name}:{line}:{column}: {message}",
                           {"script": self.script.name, "line": line, "column": column})

    def parse(self) -> Script:
        for start, body in _statements(self.text):
            lead = len(body) - len(body.lstrip())
            stripped = body.strip()
            keyword = re.match(r"\w*", stripped).group(0)
            rest = stripped[len(keyword):]
            offset = start + lead + len(keyword)
            handler = getattr(self, f"_stmt_{keyword}", None)
            if handler is None:
                raise self.error(f"unknown statement {keyword!r}", start + lead)
            handler(rest, offset)
        logger.debug(f"parsed {self.script.name}: {len(self.script.hypotheses)} hypotheses, "
                     f"{len(self.script.goals)} goals")
        return self.script

    def _names(self, rest: str, offset: int) -> List[str]:
        names = rest.split()
        for name in names:
            if not re.fullmatch(_IDENT, name):
                raise self.error(f"bad identifier {name!r}", offset + rest.find(name))
        return names

    def _stmt_symbols(self, rest: str, offset: int) -> None:
        self.script.symbols.extend(self._names(rest, offset))

    def _stmt_homs(self, rest: str, offset: int) -> None:
        self.script.homs.extend(self._names(rest, offset))

    def _stmt_vars(self, rest: str, offset: int) -> None:
        self.script.patterns.extend(self._names(rest, offset))

    def _stmt_variants(self, rest: str, offset: int) -> None:
        self.script.variants.append(self._names(rest, offset))

    def _label(self, rest: str, offset: int, default: str) -> Tuple[str, str, int]:
        m = _LABEL.match(rest)
        if m is None:
            return default, rest, offset
        return m.group("label"), rest[m.end():], offset + m.end()

    def _stmt_cell(self, rest: str, offset: int) -> None:
        label, body, offset = self._label(rest, offset, "")
        m = _CELL.match(body.strip())
        if m is None:
            raise self.error("expected 'cell (a, b): phi0 -> phi1'", offset)
        a, b, src, dst = m.group("a", "b", "src", "dst")
        self._declared(a, b, homs=(src, dst), index=offset)
        self.script.cells.append(CellDeclaration(label or f"cell({a},{b})", a, b, src, dst))

    def _declared(self, *atoms: str, homs: Tuple[str, ...], index: int) -> None:
        if self.script.symbols:
            for name in atoms:
                if name not in self.script.symbols:
                    self._warn(f"unknown symbol {name!r}", index)
        if self.script.homs:
            for name in homs:
                if name not in self.script.homs:
                    self._warn(f"unknown hom {name!r}", index)

    def _warn(self, message: str, index: int) -> None:
        line, column = _position(self.text, index)
        text = f"{self.script.name}:{line}:{column}: {message}"
        logger.warning(text)
        self.script.warnings.append(text)

    def _equation(self, body: str, offset: int) -> Tuple[Expression, Expression]:
        if body.count("=") != 1:
            raise self.error("expected exactly one '=' (an equation)", offset)
        left, right = body.split("=")
        return (self._expression(left, offset),
                self._expression(right, offset + len(left) + 1))

    def _expression(self, text: str, offset: int) -> Expression:
        parser = ExpressionParser(
            symbols=self.script.symbols or None,
            homs=self.script.homs or None,
            patterns=self.script.patterns,
        )
        try:
            e = parser.parse(text)
        except ExpressionSyntaxError as exc:
            index = offset + len(text.encode("utf-8")[:exc.offset].decode("utf-8", errors="ignore"))
            raise self.error(exc.message, index) from exc
        line, column = _position(self.text, offset)
        self.script.warnings.extend(f"{self.script.name}:{line}:{column}: {w}" for w in parser.warnings)
        return e

    def _stmt_assume(self, rest: str, offset: int) -> None:
        label, body, offset = self._label(rest, offset, f"h{len(self.script.assumptions) + 1}")
        direction = Direction.FORWARD
        m = _DIRECTION.fullmatch(body)
        if m is not None and "=" in m.group("body"):
            direction = Direction(m.group("arrow"))
            body = m.group("body")
        lhs, rhs = self._equation(body, offset)
        self.script.assumptions.append(
            Hypothesis(label, lhs, rhs, direction, frozenset(self.script.patterns)))

    def _stmt_prove(self, rest: str, offset: int) -> None:
        label, body, offset = self._label(rest, offset, f"g{len(self.script.goals) + 1}")
        lhs, rhs = self._equation(body, offset)
        self.script.goals.append(Goal(label, lhs, rhs))


def parse_script(text: str, name: str = "<script>") -> Script:
    return ScriptParser(text, name).parse()


def load_script(path: Union[str, Path]) -> Script:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScriptError(f"cannot read script {path}: {exc}", {"script": str(path)}) from exc
    return parse_script(text, path.name)


# -- verification -------------------------------------------------------------


def verify_script(source: Union[Script, str, Path], depth: int = DEFAULT_DEPTH,
                  max_states: int = DEFAULT_MAX_STATES, instantiations: int = 0,
                  rng: Optional[random.Random] = None) -> ScriptReport:
    """Prove every goal, replay every trace and optionally cross-check Proven goals over F_5."""
    script = source if isinstance(source, Script) else load_script(source)
    system = script.rewrite_system()
    results: List[ProofResult] = []
    for goal in script.goals:
        result = prove_equal(goal.lhs, goal.rhs, system, depth=depth, max_states=max_states, goal=goal.label)
        if result.proven:
            result = result.model_copy(update={"replayed": replay(goal.lhs, goal.rhs, system, result.trace)})
        logger.info(f"{script.name}/{goal.label}: {result.status.value}")
        results.append(result)

    report = ScriptReport(
        script=script.name,
        hypotheses=[f"{h.label}: {h}" for h in script.hypotheses],
        goals=results,
        warnings=list(script.warnings),
    )
    for group in script.variants:
        missing = [label for label in group if label not in {g.goal for g in results}]
        if missing:
            raise ScriptError(f"variants name unknown goals {missing}", {"script": script.name})
        report.variants.append(VariantReport(
            goals=group, proven=[label for label in group if report.result(label).proven]))

    if instantiations:
        rng = rng or random.Random(0)
        for goal, result in zip(script.goals, results):
            if result.proven:
                report.soundness[goal.label] = soundness_check(script, goal, rng, instantiations).model_dump(mode="json")
    return report
