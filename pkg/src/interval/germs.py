"""
Boundary germs and mapping classes Diff(I)/Diff_0(I).

Every germ that arises here is Mobius: an affine germ x -> p + m(x - p)
embeds as the upper-triangular matrix [[m, p - m p], [0, 1]]. Germ matrices
are kept projectively normalized (first nonzero entry equal to 1), so germ
equality is equality of normalized matrices.
"""
from __future__ import annotations

import logging
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, model_validator

from ..errors import EndpointMismatchError, EndpointNotFixedError
from .mobius import LORENTZ_INTERVAL, MobiusMap
from .pl import InteriorDiffeo, Interval, PLMap, as_fraction, fmt

logger = logging.getLogger(__name__)

GermMatrix = Tuple[Fraction, Fraction, Fraction, Fraction]


class Endpoint(str, Enum):
    LEFT = "left"
    RIGHT = "right"


def normalize_germ(m: Tuple[Any, Any, Any, Any]) -> GermMatrix:
    entries = [as_fraction(x) for x in m]
    pivot = next((x for x in entries if x != 0), None)
    if pivot is None:
        raise EndpointNotFixedError("zero matrix is not a germ")
    return tuple(x / pivot for x in entries)  # type: ignore[return-value]


def _multiply(m: GermMatrix, n: GermMatrix) -> GermMatrix:
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


class BoundaryGerm(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    endpoint: Endpoint
    point: Fraction
    matrix: GermMatrix

    @model_validator(mode="before")
    @classmethod
    def _normalize(cls, data: Any) -> Any:
        if isinstance(data, dict) and "matrix" in data:
            data = {**data, "matrix": normalize_germ(data["matrix"]), "point": as_fraction(data["point"])}
        return data

    @model_validator(mode="after")
    def _fixes_point(self) -> "BoundaryGerm":
        a, b, c, d = self.matrix
        p = self.point
        denominator = c * p + d
        if denominator == 0 or (a * p + b) / denominator != p:
            raise EndpointNotFixedError(f"germ does not fix its endpoint {fmt(p)}")
        if self.derivative() <= 0:
            raise EndpointNotFixedError(f"germ at {fmt(p)} reverses orientation")
        return self

    @classmethod
    def affine(cls, endpoint: Endpoint, point: Any, slope: Any) -> "BoundaryGerm":
        p, m = as_fraction(point), as_fraction(slope)
        return cls(endpoint=endpoint, point=p, matrix=(m, p - m * p, 0, 1))

    @classmethod
    def identity(cls, endpoint: Endpoint, point: Any) -> "BoundaryGerm":
        return cls(endpoint=endpoint, point=point, matrix=(1, 0, 0, 1))

    def derivative(self) -> Fraction:
        a, b, c, d = self.matrix
        denominator = c * self.point + d
        return (a * d - b * c) / (denominator * denominator)

    def is_identity(self) -> bool:
        return self.matrix == (1, 0, 0, 1)

    def compose(self, other: "BoundaryGerm") -> "BoundaryGerm":
        """Germ of (self o other) at the shared endpoint."""
        if self.endpoint != other.endpoint or self.point != other.point:
            raise EndpointMismatchError("germs at different endpoints do not compose")
        return BoundaryGerm(endpoint=self.endpoint, point=self.point, matrix=_multiply(self.matrix, other.matrix))

    def to_json(self) -> Dict[str, Any]:
        return {
            "endpoint": self.endpoint.value,
            "point": fmt(self.point),
            "matrix": [fmt(x) for x in self.matrix],
            "derivative": fmt(self.derivative()),
        }


class MappingClass(BaseModel):
    """The pair of boundary germs of a self-map of ``interval``."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    interval: Interval
    left: BoundaryGerm
    right: BoundaryGerm

    def is_identity(self) -> bool:
        return self.left.is_identity() and self.right.is_identity()

    def to_json(self) -> Dict[str, Any]:
        return {"interval": self.interval.to_json(), "left": self.left.to_json(), "right": self.right.to_json()}


SelfMap = Union[PLMap, MobiusMap, InteriorDiffeo]


def mapping_class(f: SelfMap, interval: Optional[Interval] = None) -> MappingClass:
    """Boundary germs of an endpoint-fixing self-map."""
    if isinstance(f, InteriorDiffeo):
        f = f.pl
    if isinstance(f, MobiusMap):
        I = interval or LORENTZ_INTERVAL
        if not I.same_as(LORENTZ_INTERVAL):
            raise EndpointNotFixedError(f"Lorentz maps act on [-1, 1], not {I}")
        return MappingClass(
            interval=I,
            left=BoundaryGerm(endpoint=Endpoint.LEFT, point=I.left, matrix=f.matrix),
            right=BoundaryGerm(endpoint=Endpoint.RIGHT, point=I.right, matrix=f.matrix),
        )
    I = interval or f.domain
    if not (f.domain.same_as(I) and f.codomain.same_as(I)):
        raise EndpointNotFixedError(f"map is not a self-map of {I}")
    if f.values[0] != I.left or f.values[-1] != I.right:
        raise EndpointNotFixedError(
            f"map sends the ends of {I} to {fmt(f.values[0])} and {fmt(f.values[-1])}",
        )
    slopes = f.slopes()
    return MappingClass(
        interval=I,
        left=BoundaryGerm.affine(Endpoint.LEFT, I.left, slopes[0]),
        right=BoundaryGerm.affine(Endpoint.RIGHT, I.right, slopes[-1]),
    )


def class_compose(first: MappingClass, second: MappingClass) -> MappingClass:
    """Class of (first o second)."""
    if not first.interval.same_as(second.interval):
        raise EndpointMismatchError("mapping classes of different intervals do not compose")
    return MappingClass(
        interval=first.interval,
        left=first.left.compose(second.left),
        right=first.right.compose(second.right),
    )


def class_equal(first: MappingClass, second: MappingClass) -> bool:
    return (first.interval.same_as(second.interval)
            and first.left.matrix == second.left.matrix
            and first.right.matrix == second.right.matrix)


def in_identity_component(f: SelfMap) -> bool:
    return mapping_class(f).is_identity()
