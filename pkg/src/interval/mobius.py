"""
The Lorentz one-parameter subgroup of PGL2 acting on [-1, 1], on the rational
points of the hyperbola c^2 - s^2 = 1.

The real parameter t enters only through the chart u = tanh(t/2), with
c = cosh t = (1 + u^2)/(1 - u^2) and s = sinh t = 2u/(1 - u^2). Composition
becomes (u1, u2) -> (u1 + u2)/(1 + u1 u2) in the chart.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from typing import Any, Dict, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from ..errors import PLMapError
from ..models.verdict import CheckResult
from .pl import Interval, as_fraction, fmt

logger = logging.getLogger(__name__)

LORENTZ_INTERVAL = Interval(left=-1, right=1, label="L")


class MobiusMap(BaseModel):
    """x -> (c x + s)/(s x + c) with c^2 - s^2 = 1 and c > 0."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    c: Fraction
    s: Fraction

    @field_validator("c", "s", mode="before")
    @classmethod
    def _exact(cls, value: Any) -> Fraction:
        return as_fraction(value)

    @model_validator(mode="after")
    def _on_hyperbola(self) -> "MobiusMap":
        if self.c * self.c - self.s * self.s != 1 or self.c <= 0:
            raise PLMapError(f"({fmt(self.c)}, {fmt(self.s)}) is not on the branch c^2 - s^2 = 1, c > 0")
        return self

    @property
    def interval(self) -> Interval:
        return LORENTZ_INTERVAL

    @property
    def matrix(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.c, self.s, self.s, self.c)

    @property
    def parameter(self) -> Fraction:
        """The chart value u with self = lorentz(u)."""
        return self.s / (1 + self.c)

    def __call__(self, x: Any) -> Fraction:
        x = as_fraction(x)
        return (self.c * x + self.s) / (self.s * x + self.c)

    def derivative(self, x: Any) -> Fraction:
        # determinant is 1
        x = as_fraction(x)
        d = self.s * x + self.c
        return 1 / (d * d)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self o other, the matrix product."""
        return MobiusMap(c=self.c * other.c + self.s * other.s, s=self.c * other.s + self.s * other.c)

    def inverse(self) -> "MobiusMap":
        return MobiusMap(c=self.c, s=-self.s)

    def is_identity(self) -> bool:
        return self.s == 0

    def to_json(self) -> Dict[str, Any]:
        return {"c": fmt(self.c), "s": fmt(self.s), "u": fmt(self.parameter)}


def _chart(u: Any) -> Fraction:
    u = as_fraction(u)
    if not -1 < u < 1:
        raise PLMapError(f"lorentz parameter {fmt(u)} must satisfy |u| < 1")
    return u


def lorentz(u: Any) -> MobiusMap:
    u = _chart(u)
    denominator = 1 - u * u
    return MobiusMap(c=(1 + u * u) / denominator, s=2 * u / denominator)


def chart_product(u1: Any, u2: Any) -> Fraction:
    u1, u2 = _chart(u1), _chart(u2)
    return (u1 + u2) / (1 + u1 * u2)


def boundary_multiplier(u: Any) -> Fraction:
    """(1 - u)/(1 + u), which equals c - s; the derivative at +1 is its square."""
    u = _chart(u)
    return (1 - u) / (1 + u)


def lorentz_flow_check(u1: Any, u2: Any) -> CheckResult:
    """Group law in the u-chart, fixed endpoints and boundary derivatives."""
    g1, g2 = lorentz(u1), lorentz(u2)
    product = g1.compose(g2)
    expected = lorentz(chart_product(u1, u2))
    failures: Dict[str, Any] = {}
    if product != expected:
        failures["group_law"] = {"product": product.to_json(), "expected": expected.to_json()}
    for g, u in ((g1, u1), (g2, u2)):
        if g(1) != 1 or g(-1) != -1:
            failures.setdefault("endpoints", []).append(fmt(as_fraction(u)))
        m = boundary_multiplier(u)
        if g.derivative(1) != m * m or g.derivative(-1) != 1 / (m * m):
            failures.setdefault("derivative", []).append(fmt(as_fraction(u)))
        if g.c - g.s != m:
            failures.setdefault("multiplier", []).append(fmt(as_fraction(u)))
    if failures:
        return CheckResult(name="lorentz_flow", passed=False, counterexample=failures)
    return CheckResult(name="lorentz_flow", passed=True, witness={"product": product.to_json()})
