"""
Soundness cross-check of proven identities in 2x2 matrices over F_5.

Every hom symbol becomes an inner automorphism of Mat2(F_5) and every atom a
random matrix, a random unit when it is ever inverted. A second model works in
the upper triangular matrices T2(F_5), where a hom may also drop the
off-diagonal entry, so proofs are checked against homs that are not injective. Declared cells are
realised as certified 2-cells through the homgroupoid layer, and plain
hypotheses are solved for one of their atoms.
"""
from __future__ import annotations

import logging
import random
from functools import lru_cache
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, Set, Tuple

from ..algebra import Algebra, AlgHom, Unit, closure, conjugation_hom, full_matrix_algebra, random_unit, twist
from ..errors import CertificationError, NotInAlgebraError, NoUnitFoundError, NotAUnitError, ScriptError
from ..groupoid import check_two_cell, conjugating_unit
from ..kernel import Matrix, invert, prime_field
from ..models.verdict import CheckResult
from .expressions import (
    Atom,
    Expression,
    HomApp,
    Inverse,
    Product,
    atoms_of,
    expression_of,
    free_reduce,
    homs_of,
    inverted_atoms,
    invert_word,
    word_of,
)
from .rewriting import Hypothesis

if TYPE_CHECKING:
    from .scripts import CellDeclaration, Goal, Script

logger = logging.getLogger(__name__)

DEFAULT_MODULUS = 5
DEFAULT_SIZE = 2
PATTERN_SAMPLES = 3
MODELS: Tuple[str, ...] = ("matrix", "triangular")


@lru_cache(maxsize=None)
def matrix_model(size: int = DEFAULT_SIZE, modulus: int = DEFAULT_MODULUS) -> Algebra:
    return full_matrix_algebra(size, prime_field(modulus), name=f"Mat{size}(F{modulus})")


@lru_cache(maxsize=None)
def triangular_model(modulus: int = DEFAULT_MODULUS) -> Algebra:
    """Upper triangular 2x2 matrices over F_p, closed from E11 and E12."""
    field = prime_field(modulus)
    return closure([Matrix.unit(2, 0, 0, field), Matrix.unit(2, 0, 1, field)], 2, field, name=f"T2(F{modulus})")


@lru_cache(maxsize=None)
def diagonal_projection(modulus: int = DEFAULT_MODULUS) -> AlgHom:
    """T2 -> T2 dropping the off-diagonal entry; its kernel is the strictly upper part."""
    algebra = triangular_model(modulus)
    field = algebra.field
    images = [Matrix(field, 2, 2, [b.raw(0, 0), field.zero, field.zero, b.raw(1, 1)]) for b in algebra.basis]
    return AlgHom(algebra, algebra, images, name="diag")


class Instantiation:
    """Matrices for atoms and automorphisms for homs, all in one matrix algebra."""

    def __init__(self, algebra: Algebra, rng: random.Random, projections: bool = False):
        self.algebra = algebra
        self.rng = rng
        self.projections = projections
        self.atoms: Dict[str, Matrix] = {}
        self.units: Dict[str, Unit] = {}
        self.homs: Dict[str, AlgHom] = {}

    def unit(self, name: str) -> Unit:
        if name not in self.units:
            if name in self.atoms:
                self.units[name] = Unit.from_matrix(self.algebra, self.atoms[name])
            else:
                self.set_unit(name, random_unit(self.algebra, self.rng))
        return self.units[name]

    def set_unit(self, name: str, u: Unit) -> None:
        self.units[name] = u
        self.atoms[name] = u.matrix

    def hom(self, name: str) -> AlgHom:
        if name not in self.homs:
            u = random_unit(self.algebra, self.rng)
            if self.projections and self.rng.random() < 0.5:
                self.homs[name] = twist(diagonal_projection(self.algebra.field.modulus), u, name=name)
            else:
                self.homs[name] = conjugation_hom(self.algebra, u, name=name)
        return self.homs[name]

    def random_matrix(self) -> Matrix:
        if self.algebra.dim == self.algebra.ambient_dim ** 2:
            return Matrix.random(self.algebra.ambient_dim, self.algebra.field, self.rng)
        return self.algebra.random_element(self.rng).matrix

    def evaluate(self, e: Expression, patterns: Optional[Dict[str, Matrix]] = None) -> Matrix:
        patterns = patterns or {}
        if isinstance(e, Atom):
            if e.name == "1":
                return self.algebra.one().matrix
            if e.name in patterns:
                return patterns[e.name]
            return self.atoms[e.name]
        if isinstance(e, Inverse):
            return invert(self.evaluate(e.body, patterns))
        if isinstance(e, Product):
            result = self.evaluate(e.factors[0], patterns)
            for f in e.factors[1:]:
                result = result @ self.evaluate(f, patterns)
            return result
        if isinstance(e, HomApp):
            return self.hom(e.hom).apply_matrix(self.evaluate(e.arg, patterns))
        raise TypeError(f"not an expression: {e!r}")


def _realise_cell(inst: Instantiation, cell: "CellDeclaration") -> None:
    phi0 = inst.hom(cell.src)
    a = inst.unit(cell.a)
    if cell.dst not in inst.homs:
        b = inst.unit(cell.b)
        sigma_a_inv = conjugation_hom(inst.algebra, a.invert(), certify=False)
        inst.homs[cell.dst] = twist(phi0.compose(sigma_a_inv), b, name=cell.dst)
    elif cell.b not in inst.atoms:
        found = conjugating_unit(phi0, inst.homs[cell.dst], rng=inst.rng)
        if found is None:
            raise NoUnitFoundError(f"{cell.src} and {cell.dst} are not conjugate in this instantiation")
        # sigma_u o phi1 = phi0 forces b = lambda phi0(a) u^-1 for a central lambda
        field = inst.algebra.field
        scalar = Matrix.identity(inst.algebra.ambient_dim, field).scale(field.random(inst.rng) or field.one)
        b_matrix = scalar @ phi0.apply_unit(a).matrix @ found.unit.inverse_matrix
        inst.set_unit(cell.b, Unit.from_matrix(inst.algebra, b_matrix))
    check_two_cell(phi0, inst.homs[cell.dst], a, inst.unit(cell.b))


def _solve(inst: Instantiation, h: Hypothesis, order: Sequence[str]) -> None:
    """Assign one free atom so that lhs = rhs holds; with nothing free the final check decides."""
    if h.patterns & (atoms_of(h.lhs) | atoms_of(h.rhs)):
        return
    balance = free_reduce(word_of(h.lhs) + invert_word(word_of(h.rhs)))
    free = [name for name in atoms_of(h.lhs) | atoms_of(h.rhs) if name not in inst.atoms]
    counts: Dict[str, int] = {}
    for letter in balance:
        counts[letter.atom] = counts.get(letter.atom, 0) + 1
    solvable = [name for name in free
                if counts.get(name) == 1 and any(letter.atom == name and not letter.homs for letter in balance)]
    if not solvable:
        return
    target = max(solvable, key=lambda name: (order.index(name) if name in order else -1, name))
    for name in sorted(free):
        if name != target:
            inst.unit(name)
    index = next(k for k, letter in enumerate(balance) if letter.atom == target)
    left = inst.evaluate(expression_of(balance[:index]))
    right = inst.evaluate(expression_of(balance[index + 1:]))
    # left t^e right = 1
    value = invert(left) @ invert(right)
    if balance[index].inverse:
        value = invert(value)
    inst.set_unit(target, Unit.from_matrix(inst.algebra, value))


def _check_hypothesis(inst: Instantiation, h: Hypothesis) -> None:
    names = sorted(h.patterns & (atoms_of(h.lhs) | atoms_of(h.rhs)))
    for _ in range(PATTERN_SAMPLES if names else 1):
        values = {name: inst.random_matrix() for name in names}
        if inst.evaluate(h.lhs, values) != inst.evaluate(h.rhs, values):
            raise CertificationError(f"hypothesis {h.label} fails in the instantiation",
                                     {"counterexample": {"hypothesis": h.label}})


def instantiate(script: "Script", rng: random.Random, extra: Sequence[Expression] = (),
                algebra: Optional[Algebra] = None, model: str = "matrix") -> Instantiation:
    """A random model of every declaration and hypothesis of ``script``.

    ``model`` is ``matrix`` (Mat2, inner automorphisms) or ``triangular``
    (T2, homs that may drop the off-diagonal entry).
    """
    if model not in MODELS:
        raise ScriptError(f"unknown instantiation model {model!r}", {"models": list(MODELS)})
    triangular = model == "triangular"
    default = triangular_model() if triangular else matrix_model()
    inst = Instantiation(algebra or default, rng, projections=triangular and (algebra is None or algebra == default))
    expressions: List[Expression] = list(extra)
    for h in script.assumptions:
        expressions.extend((h.lhs, h.rhs))
    needs_unit: Set[str] = set()
    for e in expressions:
        needs_unit |= inverted_atoms(e)
    for h in script.assumptions:
        needs_unit |= atoms_of(h.lhs) | atoms_of(h.rhs)
    needs_unit -= set(script.patterns)

    for cell in script.cells:
        _realise_cell(inst, cell)
    for h in script.assumptions:
        _solve(inst, h, script.symbols)

    mentioned: Set[str] = set(script.symbols)
    homs: Set[str] = set(script.homs)
    for e in expressions:
        mentioned |= atoms_of(e)
        homs |= homs_of(e)
    for name in sorted(mentioned - set(script.patterns)):
        if name in inst.atoms:
            continue
        if name in needs_unit:
            inst.unit(name)
        else:
            inst.atoms[name] = inst.random_matrix()
    for name in sorted(homs):
        inst.hom(name)
    for h in script.assumptions:
        _check_hypothesis(inst, h)
    return inst


def soundness_check(script: "Script", goal: "Goal", rng: random.Random, samples: int = 100,
                    models: Sequence[str] = MODELS) -> CheckResult:
    """lhs and rhs of ``goal`` agree as matrices in ``samples`` random models.

    Samples cycle through ``models``. A triangular sample whose declarations
    cannot be realised is skipped; a matrix sample that cannot be realised fails.
    """
    checked: Dict[str, int] = {model: 0 for model in models}
    skipped = 0
    for k in range(samples):
        model = models[k % len(models)]
        try:
            inst = instantiate(script, rng, extra=(goal.lhs, goal.rhs), model=model)
            lhs, rhs = inst.evaluate(goal.lhs), inst.evaluate(goal.rhs)
        except (CertificationError, NotInAlgebraError, NoUnitFoundError, NotAUnitError, ScriptError) as exc:
            if model == "triangular":
                logger.debug(f"{script.name}/{goal.label}: no triangular model in sample {k}: {exc.message}")
                skipped += 1
                continue
            logger.error(f"{script.name}/{goal.label}: instantiation {k} failed: {exc.message}")
            return CheckResult(name="soundness", passed=False,
                               counterexample={"sample": k, "model": model, "error": exc.to_dict()})
        if lhs != rhs:
            logger.error(f"{script.name}/{goal.label}: proven identity fails in sample {k} ({model})")
            return CheckResult(name="soundness", passed=False, counterexample={
                "sample": k, "model": model, "lhs": lhs.to_json(), "rhs": rhs.to_json(),
                "atoms": {name: m.to_json() for name, m in sorted(inst.atoms.items())},
                "homs": {name: h.to_json() for name, h in sorted(inst.homs.items())},
            })
        checked[model] += 1
    details = {"samples": samples, "goal": goal.label, "checked": checked, "skipped": skipped}
    if samples and not any(checked.values()):
        return CheckResult(name="soundness", passed=False, counterexample={"reason": "no sample could be realised", **details})
    return CheckResult(name="soundness", passed=True, details=details)
