"""
The embedding groupoid Emb(I, J): 2-cells (a, b): eps0 -> eps1 are pairs of
interior diffeomorphisms with b o eps0 = eps1 o a.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from typing import Any, Dict, List, NamedTuple, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from ..errors import CertificationError, CoherenceViolation, EndpointMismatchError
from ..models.verdict import CheckResult
from .pl import (
    InteriorDiffeo,
    PLMap,
    corestrict_inverse,
    fmt,
    pl_compose,
    transport,
)

logger = logging.getLogger(__name__)


class IntervalTwoCell(BaseModel):
    """A certified square b o src = dst o a."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    src: PLMap
    dst: PLMap
    a: InteriorDiffeo
    b: InteriorDiffeo

    def same_cell(self, other: "IntervalTwoCell") -> bool:
        return (self.src.same_map(other.src) and self.dst.same_map(other.dst)
                and self.a.same_map(other.a) and self.b.same_map(other.b))

    def to_json(self) -> Dict[str, Any]:
        return {"src": self.src.to_json(), "dst": self.dst.to_json(),
                "a": self.a.to_json(), "b": self.b.to_json()}


def transport_square(c: InteriorDiffeo, eps: PLMap) -> Tuple[InteriorDiffeo, Optional[Fraction]]:
    """c^eps together with the first point where eps o c and c^eps o eps differ (None if they agree)."""
    pushed = transport(c, eps)
    return pushed, pl_compose(eps, c.pl).first_disagreement(pl_compose(pushed.pl, eps))


def check_interval_two_cell(eps0: PLMap, eps1: PLMap, a: InteriorDiffeo, b: InteriorDiffeo) -> IntervalTwoCell:
    if not (eps0.domain.same_as(eps1.domain) and eps0.codomain.same_as(eps1.codomain)):
        raise EndpointMismatchError("embeddings of a 2-cell must share domain and codomain")
    if not a.interval.same_as(eps0.domain):
        raise EndpointMismatchError(f"a acts on {a.interval}, expected {eps0.domain}")
    if not b.interval.same_as(eps0.codomain):
        raise EndpointMismatchError(f"b acts on {b.interval}, expected {eps0.codomain}")
    lhs = pl_compose(b.pl, eps0)
    rhs = pl_compose(eps1, a.pl)
    point = lhs.first_disagreement(rhs)
    if point is not None:
        raise CertificationError(
            f"b o eps0 and eps1 o a differ at {fmt(point)}",
            {"counterexample": {"point": fmt(point), "b_eps0": fmt(lhs(point)), "eps1_a": fmt(rhs(point))}},
        )
    return IntervalTwoCell(src=eps0, dst=eps1, a=a, b=b)


def identity_interval_cell(eps: PLMap) -> IntervalTwoCell:
    return check_interval_two_cell(eps, eps, InteriorDiffeo.identity(eps.domain),
                                   InteriorDiffeo.identity(eps.codomain))


def interval_vcompose(f: IntervalTwoCell, g: IntervalTwoCell) -> IntervalTwoCell:
    """g o f = (a1 o a0, b1 o b0) for f: eps0 -> eps1 and g: eps1 -> eps2."""
    if not f.dst.same_map(g.src):
        raise EndpointMismatchError("vertical composition needs f.dst = g.src")
    return check_interval_two_cell(f.src, g.dst, g.a.compose(f.a), g.b.compose(f.b))


def interval_hcompose(f: IntervalTwoCell, g: IntervalTwoCell) -> IntervalTwoCell:
    """Horizontal composite of f in Emb(I, J) and g in Emb(J, K).

    For f = (a, b0): eps0 -> eps1 and g = (b1, c): delta0 -> delta1 the
    composite is (a, c o (b1^-1 o b0)^delta0) from delta0 o eps0 to
    delta1 o eps1.
    """
    if not f.src.codomain.same_as(g.src.domain):
        raise EndpointMismatchError(f"cannot compose cells into {f.src.codomain} and out of {g.src.domain}")
    b0, b1, c = f.b, g.a, g.b
    inner = transport(b1.inverse().compose(b0), g.src)
    try:
        return check_interval_two_cell(
            pl_compose(g.src, f.src),
            pl_compose(g.dst, f.dst),
            f.a,
            c.compose(inner),
        )
    except CertificationError as exc:
        logger.error(f"interval horizontal composite failed to certify: {exc.message}")
        raise CoherenceViolation("interval horizontal composite is not a 2-cell", exc.details) from exc


def interval_associativity_check(f: IntervalTwoCell, g: IntervalTwoCell, h: IntervalTwoCell) -> CheckResult:
    left = interval_hcompose(interval_hcompose(f, g), h)
    right = interval_hcompose(f, interval_hcompose(g, h))
    if left.same_cell(right):
        return CheckResult(name="interval_associativity", passed=True, witness={"composite": left.to_json()})
    return CheckResult(name="interval_associativity", passed=False,
                       counterexample={"left": left.to_json(), "right": right.to_json()})


# -- pi0 of Emb(I, J) ------------------------------------------------------------------

class EndpointPattern(NamedTuple):
    left: bool
    right: bool


class EmbeddingComparison(NamedTuple):
    equivalent: bool
    cell: Optional[IntervalTwoCell]
    reason: str


def endpoint_pattern(eps: PLMap) -> EndpointPattern:
    """Which ends of I land on the corresponding ends of J."""
    return EndpointPattern(eps.values[0] == eps.codomain.left, eps.values[-1] == eps.codomain.right)


def _splice(eps0: PLMap, eps1: PLMap) -> PLMap:
    """A self-map of J extending eps1 o eps0^-1, spliced to the identity near unmatched ends."""
    J = eps0.codomain
    middle = pl_compose(eps1, corestrict_inverse(eps0))
    p0, p1 = eps0.values[0], eps1.values[0]
    q0, q1 = eps0.values[-1], eps1.values[-1]
    points: List[Tuple[Fraction, Fraction]] = []
    if p0 == J.left:
        points.append((J.left, J.left))
    else:
        m = (J.left + min(p0, p1)) / 2
        points.extend([(J.left, J.left), (m, m)])
    points.extend(middle.points)
    if q0 == J.right:
        points.append((J.right, J.right))
    else:
        m = (J.right + max(q0, q1)) / 2
        points.extend([(m, m), (J.right, J.right)])
    return PLMap.from_points(J, J, points)


def pi0_emb(eps0: PLMap, eps1: PLMap) -> EmbeddingComparison:
    """Decide whether eps0 and eps1 are connected in Emb(I, J), with a witness (id, b) when they are."""
    if not (eps0.domain.same_as(eps1.domain) and eps0.codomain.same_as(eps1.codomain)):
        raise EndpointMismatchError("embeddings must share domain and codomain")
    pattern0, pattern1 = endpoint_pattern(eps0), endpoint_pattern(eps1)
    if pattern0 != pattern1:
        return EmbeddingComparison(False, None, f"endpoint patterns differ: {tuple(pattern0)} vs {tuple(pattern1)}")
    slopes0, slopes1 = eps0.slopes(), eps1.slopes()
    if pattern0.left and slopes0[0] != slopes1[0]:
        return EmbeddingComparison(False, None,
                                   f"left germs differ: slope {fmt(slopes0[0])} vs {fmt(slopes1[0])}")
    if pattern0.right and slopes0[-1] != slopes1[-1]:
        return EmbeddingComparison(False, None,
                                   f"right germs differ: slope {fmt(slopes0[-1])} vs {fmt(slopes1[-1])}")
    b = InteriorDiffeo.from_map(_splice(eps0, eps1))
    cell = check_interval_two_cell(eps0, eps1, InteriorDiffeo.identity(eps0.domain), b)
    return EmbeddingComparison(True, cell, "witness constructed")
