"""
The groupoid Hom(A, B) of unital homomorphisms and unit-pair 2-cells, with
vertical and horizontal composition.

A 2-cell (a, b): phi0 -> phi1 is a pair of units a of A and b of B with
sigma_b o phi0 = phi1 o sigma_a. Cells are only ever produced by
``check_two_cell``, so every TwoCell in circulation is certified.
"""
from __future__ import annotations

import logging
from typing import Any, Dict, Optional, Tuple

from ..algebra import AlgHom, Unit, inner_aut
from ..errors import (
    CertificationError,
    CoherenceViolation,
    EndpointMismatchError,
    NotAUnitError,
    ParentMismatchError,
)
from ..models.verdict import CheckResult

logger = logging.getLogger(__name__)


class TwoCell:
    """A certified 2-cell (a, b): src -> dst."""

    __slots__ = ("src", "dst", "a", "b")

    def __init__(self, src: AlgHom, dst: AlgHom, a: Unit, b: Unit):
        self.src = src
        self.dst = dst
        self.a = a
        self.b = b

    @property
    def source_algebra(self):
        return self.src.source

    @property
    def target_algebra(self):
        return self.src.target

    def conjugator(self) -> Unit:
        """phi1(a) b^-1, which conjugates phi1 back to phi0."""
        return self.dst.apply_unit(self.a) * self.b.invert()

    def same_pair(self, other: "TwoCell") -> bool:
        return self.a == other.a and self.b == other.b

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, TwoCell):
            return NotImplemented
        return self.src == other.src and self.dst == other.dst and self.same_pair(other)

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __repr__(self) -> str:
        return f"TwoCell({self.src.name} => {self.dst.name})"

    def to_json(self) -> Dict[str, Any]:
        return {
            "src": self.src.name,
            "dst": self.dst.name,
            "a": self.a.to_json(),
            "b": self.b.to_json(),
        }


def check_two_cell(phi0: AlgHom, phi1: AlgHom, a: Unit, b: Unit) -> TwoCell:
    """Certify (a, b) as a 2-cell phi0 -> phi1 or raise CertificationError."""
    if not phi0.same_endpoints(phi1):
        raise EndpointMismatchError(
            f"{phi0.name} and {phi1.name} do not share source and target",
            {"phi0": [phi0.source.name, phi0.target.name], "phi1": [phi1.source.name, phi1.target.name]},
        )
    if not isinstance(a, Unit) or not isinstance(b, Unit):
        raise NotAUnitError("2-cell components must be units")
    if a.parent != phi0.source:
        raise ParentMismatchError(f"a must be a unit of {phi0.source.name}")
    if b.parent != phi0.target:
        raise ParentMismatchError(f"b must be a unit of {phi0.target.name}")

    # sigma_b o phi0 = phi1 o sigma_a
    for k, x in enumerate(phi0.source.basis_elements()):
        lhs = inner_aut(b, phi0(x))
        rhs = phi1(inner_aut(a, x))
        if lhs != rhs:
            raise CertificationError(
                f"sigma_b o {phi0.name} differs from {phi1.name} o sigma_a on basis element {k}",
                {"counterexample": {"basis_index": k, "sigma_b_phi0": lhs.to_json(), "phi1_sigma_a": rhs.to_json()}},
            )

    # second form: sigma_w(phi1(x)) = phi0(x) with w = phi1(a) b^-1
    phi1_a = phi1.apply_unit(a)
    w = phi1_a * b.invert()
    for k, x in enumerate(phi0.source.basis_elements()):
        if inner_aut(w, phi1(x)) != phi0(x):
            raise CoherenceViolation(
                f"conjugator form of the 2-cell condition fails on basis element {k}",
                {"basis_index": k},
            )

    # exchange identity, the defining condition at x = a
    if w.element != b.inverse * phi0(a.element):
        raise CoherenceViolation("phi1(a) b^-1 differs from b^-1 phi0(a)")
    return TwoCell(phi0, phi1, a, b)


def identity_cell(phi: AlgHom) -> TwoCell:
    return check_two_cell(phi, phi, Unit.identity(phi.source), Unit.identity(phi.target))


def invert_cell(f: TwoCell) -> TwoCell:
    """The groupoid inverse (a^-1, b^-1): phi1 -> phi0."""
    return check_two_cell(f.dst, f.src, f.a.invert(), f.b.invert())


def vcompose(f: TwoCell, g: TwoCell) -> TwoCell:
    """g o f for f: phi0 -> phi1 and g: phi1 -> phi2, the pair (a0 a1, b0 b1)."""
    if f.dst != g.src:
        raise EndpointMismatchError(
            f"cannot stack {g!r} on {f!r}: {f.dst.name} and {g.src.name} differ",
            {"f_dst": f.dst.to_json(), "g_src": g.src.to_json()},
        )
    return check_two_cell(f.src, g.dst, f.a * g.a, f.b * g.b)


def hcompose(f: TwoCell, g: TwoCell) -> TwoCell:
    """Horizontal composite of f in Hom(A,B) and g in Hom(B,C).

    For f = (a, b0): phi0 -> phi1 and g = (b1, c): psi0 -> psi1 the composite
    is (a, c psi1(b1^-1 b0)) from psi0 o phi0 to psi1 o phi1.
    """
    if f.target_algebra != g.source_algebra:
        raise EndpointMismatchError(
            f"cannot compose cells over {f.target_algebra.name} and {g.source_algebra.name}",
        )
    psi1 = g.dst
    b0, b1 = f.b, g.a
    c = g.b * psi1.apply_unit(b1.invert() * b0)
    src = g.src.compose(f.src)
    dst = g.dst.compose(f.dst)
    try:
        return check_two_cell(src, dst, f.a, c)
    except CertificationError as exc:
        logger.error(f"horizontal composite failed to certify: {exc.message}")
        raise CoherenceViolation("horizontal composite is not a 2-cell", exc.details) from exc


def associativity_check(f: TwoCell, g: TwoCell, h: TwoCell) -> CheckResult:
    """Both bracketings of f, g, h over Z -> A -> B -> C must be the same pair."""
    left = hcompose(hcompose(f, g), h)
    right = hcompose(f, hcompose(g, h))
    same_homs = left.src == right.src and left.dst == right.dst
    if same_homs and left.same_pair(right):
        return CheckResult(name="associativity", passed=True, witness={"composite": left.to_json()})
    return CheckResult(
        name="associativity",
        passed=False,
        counterexample={
            "same_homs": same_homs,
            "left": left.to_json(),
            "right": right.to_json(),
        },
    )


def interchange_probe(grid: Tuple[TwoCell, TwoCell, TwoCell, TwoCell]) -> CheckResult:
    """Compare the two pastings of a 2x2 grid.

    ``grid`` is (f0, f1, g0, g1) with f0: phi0 -> phi1, f1: phi1 -> phi2 in
    Hom(A, B) and g0: psi0 -> psi1, g1: psi1 -> psi2 in Hom(B, C).
    """
    f0, f1, g0, g1 = grid
    vertical_first = hcompose(vcompose(f0, f1), vcompose(g0, g1))
    horizontal_first = vcompose(hcompose(f0, g0), hcompose(f1, g1))
    same_homs = vertical_first.src == horizontal_first.src and vertical_first.dst == horizontal_first.dst
    strict = same_homs and vertical_first.same_pair(horizontal_first)
    details: Dict[str, Any] = {
        "strict_equal": strict,
        "same_homs": same_homs,
        "a_equal": vertical_first.a == horizontal_first.a,
        "b_equal": vertical_first.b == horizontal_first.b,
        "both_certified": True,
    }
    if strict:
        return CheckResult(name="interchange", passed=True, witness={"composite": vertical_first.to_json()},
                           details=details)
    # both pastings are certified cells between the same homs, so they agree in pi0
    ratio: Optional[Unit] = None
    if same_homs:
        ratio = horizontal_first.b.invert() * vertical_first.b
    return CheckResult(
        name="interchange",
        passed=False,
        counterexample={
            "vertical_first": vertical_first.to_json(),
            "horizontal_first": horizontal_first.to_json(),
            "b_ratio": ratio.to_json() if ratio is not None else None,
        },
        details=details,
    )
