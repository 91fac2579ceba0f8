"""
Exact orientation-preserving piecewise-linear interval maps.

A PLMap is stored by its breakpoints and their images, both strictly
increasing rational sequences. Collinear interior breakpoints are merged on
construction, so two maps are equal exactly when their data are equal.
"""
from __future__ import annotations

import bisect
import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from ..errors import CollarError, PLMapError

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, Fraction]


def as_fraction(value: Any) -> Fraction:
    """Exact rational from an int, Fraction or "p/q" string; floats are refused."""
    if isinstance(value, bool) or isinstance(value, float):
        raise PLMapError(f"inexact value {value!r}; use an integer, Fraction or 'p/q' string")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise PLMapError(f"cannot read {value!r} as a rational") from None
    raise PLMapError(f"cannot read {value!r} as a rational")


def fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Interval(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    left: Fraction
    right: Fraction
    label: str = "I"

    @field_validator("left", "right", mode="before")
    @classmethod
    def _exact(cls, value: Any) -> Fraction:
        return as_fraction(value)

    @model_validator(mode="after")
    def _nondegenerate(self) -> "Interval":
        if not self.left < self.right:
            raise PLMapError(f"interval [{fmt(self.left)}, {fmt(self.right)}] is degenerate")
        return self

    @property
    def length(self) -> Fraction:
        return self.right - self.left

    def contains(self, x: Fraction) -> bool:
        return self.left <= x <= self.right

    def contains_interval(self, other: "Interval") -> bool:
        return self.left <= other.left and other.right <= self.right

    def same_as(self, other: "Interval") -> bool:
        """Equality of the underlying point sets, ignoring labels."""
        return self.left == other.left and self.right == other.right

    def to_json(self) -> Dict[str, str]:
        return {"left": fmt(self.left), "right": fmt(self.right), "label": self.label}

    def __str__(self) -> str:
        return f"{self.label}=[{fmt(self.left)}, {fmt(self.right)}]"


def _canonical_points(points: Sequence[Point]) -> List[Point]:
    """Drop repeated points and merge interior points lying on a straight segment."""
    out: List[Point] = []
    for x, y in points:
        if out and out[-1][0] == x:
            if out[-1][1] != y:
                raise PLMapError(f"two values at breakpoint {fmt(x)}")
            continue
        while len(out) >= 2:
            (x0, y0), (x1, y1) = out[-2], out[-1]
            if (y1 - y0) * (x - x1) == (y - y1) * (x1 - x0):
                out.pop()
            else:
                break
        out.append((x, y))
    return out


class PLMap(BaseModel):
    """An increasing PL map from ``domain`` into ``codomain``."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    domain: Interval
    codomain: Interval
    breakpoints: Tuple[Fraction, ...]
    values: Tuple[Fraction, ...]

    @model_validator(mode="before")
    @classmethod
    def _canonicalize(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        xs = [as_fraction(x) for x in data.get("breakpoints", ())]
        ys = [as_fraction(y) for y in data.get("values", ())]
        if len(xs) != len(ys):
            raise PLMapError(f"{len(xs)} breakpoints but {len(ys)} values")
        points = _canonical_points(list(zip(xs, ys)))
        return {
            **data,
            "breakpoints": tuple(x for x, _ in points),
            "values": tuple(y for _, y in points),
        }

    @model_validator(mode="after")
    def _check(self) -> "PLMap":
        xs, ys = self.breakpoints, self.values
        if len(xs) < 2:
            raise PLMapError("a PL map needs at least two breakpoints")
        if xs[0] != self.domain.left or xs[-1] != self.domain.right:
            raise PLMapError(
                f"breakpoints must run from {fmt(self.domain.left)} to {fmt(self.domain.right)}",
            )
        for k in range(len(xs) - 1):
            if not xs[k] < xs[k + 1]:
                raise PLMapError(f"breakpoints not strictly increasing at {fmt(xs[k + 1])}")
            if not ys[k] < ys[k + 1]:
                raise PLMapError(
                    f"map is not orientation preserving on [{fmt(xs[k])}, {fmt(xs[k + 1])}]",
                )
        if ys[0] < self.codomain.left or ys[-1] > self.codomain.right:
            raise PLMapError(
                f"image [{fmt(ys[0])}, {fmt(ys[-1])}] escapes {self.codomain}",
            )
        return self

    # -- construction --------------------------------------------------------------

    @classmethod
    def from_points(cls, domain: Interval, codomain: Interval, points: Sequence[Tuple[Any, Any]]) -> "PLMap":
        return cls(domain=domain, codomain=codomain,
                   breakpoints=[x for x, _ in points], values=[y for _, y in points])

    @classmethod
    def identity(cls, interval: Interval) -> "PLMap":
        return cls(domain=interval, codomain=interval,
                   breakpoints=[interval.left, interval.right], values=[interval.left, interval.right])

    @classmethod
    def affine(cls, domain: Interval, codomain: Interval, slope: Any, shift: Any) -> "PLMap":
        """x -> slope * x + shift."""
        m, c = as_fraction(slope), as_fraction(shift)
        return cls(domain=domain, codomain=codomain,
                   breakpoints=[domain.left, domain.right],
                   values=[m * domain.left + c, m * domain.right + c])

    # -- evaluation ------------------------------------------------------------------

    @property
    def points(self) -> List[Point]:
        return list(zip(self.breakpoints, self.values))

    def _segment(self, x: Fraction) -> int:
        k = bisect.bisect_right(self.breakpoints, x) - 1
        return min(max(k, 0), len(self.breakpoints) - 2)

    def __call__(self, x: Any) -> Fraction:
        x = as_fraction(x)
        if not self.domain.contains(x):
            raise PLMapError(f"{fmt(x)} is outside the domain {self.domain}")
        k = self._segment(x)
        x0, x1 = self.breakpoints[k], self.breakpoints[k + 1]
        y0, y1 = self.values[k], self.values[k + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def preimage(self, y: Any) -> Fraction:
        y = as_fraction(y)
        if not (self.values[0] <= y <= self.values[-1]):
            raise PLMapError(f"{fmt(y)} is outside the image of the map")
        k = min(max(bisect.bisect_right(self.values, y) - 1, 0), len(self.values) - 2)
        x0, x1 = self.breakpoints[k], self.breakpoints[k + 1]
        y0, y1 = self.values[k], self.values[k + 1]
        return x0 + (x1 - x0) * (y - y0) / (y1 - y0)

    def slopes(self) -> List[Fraction]:
        xs, ys = self.breakpoints, self.values
        return [(ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]) for k in range(len(xs) - 1)]

    def slope_at(self, x: Any, side: str = "right") -> Fraction:
        """One-sided derivative; ``side`` is "right" or "left"."""
        x = as_fraction(x)
        if not self.domain.contains(x):
            raise PLMapError(f"{fmt(x)} is outside the domain {self.domain}")
        slopes = self.slopes()
        if side == "right":
            if x == self.domain.right:
                raise PLMapError("no right derivative at the right end")
            return slopes[bisect.bisect_right(self.breakpoints, x) - 1]
        if x == self.domain.left:
            raise PLMapError("no left derivative at the left end")
        return slopes[bisect.bisect_left(self.breakpoints, x) - 1]

    @property
    def image(self) -> Interval:
        return Interval(left=self.values[0], right=self.values[-1], label=f"{self.domain.label}'")

    def is_surjective(self) -> bool:
        return self.values[0] == self.codomain.left and self.values[-1] == self.codomain.right

    def is_identity(self) -> bool:
        return self.domain.same_as(self.codomain) and self.breakpoints == self.values

    def same_map(self, other: "PLMap") -> bool:
        return (self.domain.same_as(other.domain) and self.codomain.same_as(other.codomain)
                and self.breakpoints == other.breakpoints and self.values == other.values)

    def first_disagreement(self, other: "PLMap") -> Optional[Fraction]:
        """Leftmost merged breakpoint where the two maps differ, or None."""
        if not self.domain.same_as(other.domain):
            raise PLMapError("maps on different domains cannot be compared pointwise")
        for x in sorted(set(self.breakpoints) | set(other.breakpoints)):
            if self(x) != other(x):
                return x
        return None

    def to_json(self) -> Dict[str, Any]:
        return {
            "domain": self.domain.to_json(),
            "codomain": self.codomain.to_json(),
            "breakpoints": [fmt(x) for x in self.breakpoints],
            "values": [fmt(y) for y in self.values],
        }


def pl_compose(f: PLMap, g: PLMap) -> PLMap:
    """f o g. The image of g must lie in the domain of f."""
    if not f.domain.contains_interval(g.image):
        raise PLMapError(
            f"image of the inner map escapes the domain {f.domain} of the outer map",
            {"image": g.image.to_json(), "domain": f.domain.to_json()},
        )
    lo, hi = g.values[0], g.values[-1]
    xs = set(g.breakpoints)
    for t in f.breakpoints:
        if lo <= t <= hi:
            xs.add(g.preimage(t))
    ordered = sorted(xs)
    return PLMap(domain=g.domain, codomain=f.codomain,
                 breakpoints=ordered, values=[f(g(x)) for x in ordered])


def pl_invert(f: PLMap) -> PLMap:
    """Inverse of a map onto its codomain: breakpoints and values swap roles."""
    if not f.is_surjective():
        raise PLMapError(
            f"map onto [{fmt(f.values[0])}, {fmt(f.values[-1])}] is not onto {f.codomain}",
        )
    return PLMap(domain=f.codomain, codomain=f.domain, breakpoints=f.values, values=f.breakpoints)


def corestrict_inverse(f: PLMap) -> PLMap:
    """Inverse of f on its image, as a map image -> domain."""
    return PLMap(domain=f.image, codomain=f.domain, breakpoints=f.values, values=f.breakpoints)


class InteriorDiffeo(BaseModel):
    """A PL self-homeomorphism equal to the identity on collars of width ``collar``."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    pl: PLMap
    collar: Fraction

    @field_validator("collar", mode="before")
    @classmethod
    def _exact(cls, value: Any) -> Fraction:
        return as_fraction(value)

    @model_validator(mode="after")
    def _check(self) -> "InteriorDiffeo":
        f = self.pl
        I = f.domain
        if not I.same_as(f.codomain):
            raise CollarError("an interior diffeomorphism maps an interval to itself")
        if not f.is_surjective():
            raise CollarError("an interior diffeomorphism must be onto")
        if not (0 < self.collar <= I.length / 2):
            raise CollarError(f"collar {fmt(self.collar)} must lie in (0, {fmt(I.length / 2)}]")
        left_edge, right_edge = I.left + self.collar, I.right - self.collar
        probes = [left_edge, right_edge] + [x for x in f.breakpoints if x <= left_edge or x >= right_edge]
        for x in probes:
            if f(x) != x:
                raise CollarError(
                    f"map moves {fmt(x)}, inside the collar of width {fmt(self.collar)}",
                    {"point": fmt(x)},
                )
        return self

    @property
    def interval(self) -> Interval:
        return self.pl.domain

    @classmethod
    def identity(cls, interval: Interval) -> "InteriorDiffeo":
        return cls(pl=PLMap.identity(interval), collar=interval.length / 2)

    @classmethod
    def from_map(cls, f: PLMap) -> "InteriorDiffeo":
        """Certify f with the widest collar it admits."""
        left, right = fixed_collars(f)
        width = min(left, right, f.domain.length / 2)
        if width <= 0:
            raise CollarError("map is not the identity near both ends", {"map": f.to_json()})
        return cls(pl=f, collar=width)

    def __call__(self, x: Any) -> Fraction:
        return self.pl(x)

    def compose(self, other: "InteriorDiffeo") -> "InteriorDiffeo":
        """self o other."""
        return InteriorDiffeo(pl=pl_compose(self.pl, other.pl), collar=min(self.collar, other.collar))

    def inverse(self) -> "InteriorDiffeo":
        return InteriorDiffeo(pl=pl_invert(self.pl), collar=self.collar)

    def is_identity(self) -> bool:
        return self.pl.is_identity()

    def same_map(self, other: "InteriorDiffeo") -> bool:
        return self.pl.same_map(other.pl)

    def support(self) -> Optional[Interval]:
        """Smallest closed interval outside which the map is the identity."""
        moved = [k for k in range(len(self.pl.breakpoints) - 1)
                 if not (self.pl.values[k] == self.pl.breakpoints[k]
                         and self.pl.values[k + 1] == self.pl.breakpoints[k + 1])]
        if not moved:
            return None
        xs = self.pl.breakpoints
        return Interval(left=xs[moved[0]], right=xs[moved[-1] + 1], label=f"supp {self.interval.label}")

    def to_json(self) -> Dict[str, Any]:
        data = self.pl.to_json()
        data["collar"] = fmt(self.collar)
        return data


def fixed_collars(f: PLMap) -> Tuple[Fraction, Fraction]:
    """Widths of the largest end segments on which f is the identity."""
    xs, ys = f.breakpoints, f.values
    n = len(xs)
    left = Fraction(0)
    if ys[0] == xs[0]:
        k = 0
        while k + 1 < n and ys[k + 1] == xs[k + 1]:
            k += 1
        left = xs[k] - xs[0]
    right = Fraction(0)
    if ys[-1] == xs[-1]:
        k = n - 1
        while k - 1 >= 0 and ys[k - 1] == xs[k - 1]:
            k -= 1
        right = xs[-1] - xs[k]
    return left, right


def transport(c: InteriorDiffeo, eps: PLMap) -> InteriorDiffeo:
    """c^eps on J: eps o c o eps^-1 on the image of eps, the identity elsewhere."""
    if not c.interval.same_as(eps.domain):
        raise PLMapError(f"diffeomorphism of {c.interval} cannot be transported along a map from {eps.domain}")
    J = eps.codomain
    inner = pl_compose(pl_compose(eps, c.pl), corestrict_inverse(eps))
    points: List[Tuple[Fraction, Fraction]] = [(J.left, J.left)]
    points.extend(inner.points)
    points.append((J.right, J.right))
    pushed = PLMap.from_points(J, J, points)
    I = c.interval
    collar = min(eps(I.left + c.collar) - J.left, J.right - eps(I.right - c.collar), J.length / 2)
    return InteriorDiffeo(pl=pushed, collar=collar)
