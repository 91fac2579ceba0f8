"""
The discrete regime: lattice sites of an interval, site permutations as
discrete interior automorphisms, site embeddings and the 2-cells between them.

An orientation-preserving PL map that permutes a finite set of sites fixes
each of them, so restriction of a PL interior diffeomorphism always gives the
identity permutation. Transpositions and the full symmetric group on sites
live only here.
"""
from __future__ import annotations

import itertools
import logging
from fractions import Fraction
from typing import Any, Dict, Iterator, Optional, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from ..errors import CertificationError, CoherenceViolation, EndpointMismatchError, SiteIncompatibleError
from ..interval.cells import IntervalTwoCell
from ..interval.pl import InteriorDiffeo, Interval, PLMap, fmt

logger = logging.getLogger(__name__)


class SiteSet(BaseModel):
    """The r - 1 interior lattice points of ``interval`` at mesh |I|/r."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    interval: Interval
    resolution: int

    @field_validator("resolution")
    @classmethod
    def _at_least_two(cls, value: int) -> int:
        if value < 2:
            raise SiteIncompatibleError(f"resolution {value} leaves no interior site; need r >= 2")
        return value

    @property
    def mesh(self) -> Fraction:
        return self.interval.length / self.resolution

    @property
    def sites(self) -> Tuple[Fraction, ...]:
        h = self.mesh
        return tuple(self.interval.left + k * h for k in range(1, self.resolution))

    @property
    def count(self) -> int:
        return self.resolution - 1

    def index_of(self, x: Fraction) -> Optional[int]:
        offset = (x - self.interval.left) / self.mesh
        if offset.denominator != 1 or not 1 <= offset <= self.count:
            return None
        return int(offset) - 1

    def same_as(self, other: "SiteSet") -> bool:
        return self.interval.same_as(other.interval) and self.resolution == other.resolution

    def at_mesh(self, interval: Interval) -> "SiteSet":
        """Sites of another interval at the same mesh."""
        ratio = interval.length / self.mesh
        if ratio.denominator != 1:
            raise SiteIncompatibleError(
                f"{interval} is not a whole number of cells of width {fmt(self.mesh)}",
                {"interval": interval.to_json(), "mesh": fmt(self.mesh)},
            )
        return SiteSet(interval=interval, resolution=int(ratio))

    def to_json(self) -> Dict[str, Any]:
        return {
            "interval": self.interval.to_json(),
            "resolution": self.resolution,
            "sites": [fmt(s) for s in self.sites],
        }


def _site_image(sites: SiteSet, target: SiteSet, f: Any, k: int) -> int:
    x = sites.sites[k]
    y = f(x)
    j = target.index_of(y)
    if j is None:
        raise SiteIncompatibleError(
            f"site {fmt(x)} of {sites.interval} lands on {fmt(y)}, which is not a site of {target.interval}",
            {"site": fmt(x), "image": fmt(y), "mesh": fmt(target.mesh)},
        )
    return j


class SitePermutation(BaseModel):
    """A permutation of the sites of ``sites``; ``images[k]`` is the index of a(s_k)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    sites: SiteSet
    images: Tuple[int, ...]

    @model_validator(mode="after")
    def _is_permutation(self) -> "SitePermutation":
        if sorted(self.images) != list(range(self.sites.count)):
            raise SiteIncompatibleError(f"{list(self.images)} is not a permutation of {self.sites.count} sites")
        return self

    @classmethod
    def identity(cls, sites: SiteSet) -> "SitePermutation":
        return cls(sites=sites, images=tuple(range(sites.count)))

    @classmethod
    def transposition(cls, sites: SiteSet, i: int, j: int) -> "SitePermutation":
        images = list(range(sites.count))
        images[i], images[j] = images[j], images[i]
        return cls(sites=sites, images=tuple(images))

    @classmethod
    def from_diffeo(cls, a: InteriorDiffeo, sites: SiteSet) -> "SitePermutation":
        if not a.interval.same_as(sites.interval):
            raise EndpointMismatchError(f"diffeomorphism of {a.interval} restricted to sites of {sites.interval}")
        return cls(sites=sites, images=tuple(_site_image(sites, sites, a, k) for k in range(sites.count)))

    def __call__(self, k: int) -> int:
        return self.images[k]

    def compose(self, other: "SitePermutation") -> "SitePermutation":
        """self o other."""
        if not self.sites.same_as(other.sites):
            raise EndpointMismatchError("permutations of different site sets do not compose")
        return SitePermutation(sites=self.sites, images=tuple(self.images[k] for k in other.images))

    def inverse(self) -> "SitePermutation":
        images = [0] * len(self.images)
        for k, j in enumerate(self.images):
            images[j] = k
        return SitePermutation(sites=self.sites, images=tuple(images))

    def is_identity(self) -> bool:
        return self.images == tuple(range(len(self.images)))

    def same_map(self, other: "SitePermutation") -> bool:
        return self.sites.same_as(other.sites) and self.images == other.images

    def to_json(self) -> Dict[str, Any]:
        return {"sites": self.sites.to_json(), "images": list(self.images)}


def all_permutations(sites: SiteSet) -> Iterator[SitePermutation]:
    for images in itertools.permutations(range(sites.count)):
        yield SitePermutation(sites=sites, images=images)


class SiteEmbedding(BaseModel):
    """An injection from the sites of ``source`` into the sites of ``target``.

    Restrictions of PL embeddings are increasing; twisting by a site
    permutation can break monotonicity, so any injection is allowed.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    source: SiteSet
    target: SiteSet
    images: Tuple[int, ...]

    @model_validator(mode="after")
    def _is_injection(self) -> "SiteEmbedding":
        if len(self.images) != self.source.count:
            raise SiteIncompatibleError(f"{len(self.images)} images for {self.source.count} sites")
        if len(set(self.images)) != len(self.images) or not all(0 <= j < self.target.count for j in self.images):
            raise SiteIncompatibleError(f"{list(self.images)} is not an injection into {self.target.count} sites")
        return self

    @classmethod
    def from_pl(cls, eps: PLMap, resolution: int) -> "SiteEmbedding":
        """Restriction of eps to the sites of its domain at ``resolution``; the target keeps the mesh."""
        source = SiteSet(interval=eps.domain, resolution=resolution)
        target = source.at_mesh(eps.codomain)
        return cls(source=source, target=target,
                   images=tuple(_site_image(source, target, eps, k) for k in range(source.count)))

    @classmethod
    def identity(cls, sites: SiteSet) -> "SiteEmbedding":
        return cls(source=sites, target=sites, images=tuple(range(sites.count)))

    def __call__(self, k: int) -> int:
        return self.images[k]

    def compose(self, other: "SiteEmbedding") -> "SiteEmbedding":
        """self o other."""
        if not other.target.same_as(self.source):
            raise EndpointMismatchError("site embeddings do not compose")
        return SiteEmbedding(source=other.source, target=self.target,
                             images=tuple(self.images[k] for k in other.images))

    def after(self, a: SitePermutation) -> "SiteEmbedding":
        """self o a."""
        if not a.sites.same_as(self.source):
            raise EndpointMismatchError("permutation and embedding act on different sites")
        return SiteEmbedding(source=self.source, target=self.target, images=tuple(self.images[k] for k in a.images))

    def then(self, b: SitePermutation) -> "SiteEmbedding":
        """b o self."""
        if not b.sites.same_as(self.target):
            raise EndpointMismatchError("permutation and embedding act on different sites")
        return SiteEmbedding(source=self.source, target=self.target, images=tuple(b.images[j] for j in self.images))

    def same_map(self, other: "SiteEmbedding") -> bool:
        return (self.source.same_as(other.source) and self.target.same_as(other.target)
                and self.images == other.images)

    def to_json(self) -> Dict[str, Any]:
        return {"source": self.source.to_json(), "target": self.target.to_json(), "images": list(self.images)}


def discrete_transport(c: SitePermutation, eps: SiteEmbedding) -> SitePermutation:
    """c^eps: eps o c o eps^-1 on the image of eps, the identity elsewhere."""
    if not c.sites.same_as(eps.source):
        raise EndpointMismatchError("transport needs a permutation of the embedding's source sites")
    images = list(range(eps.target.count))
    for k, j in enumerate(eps.images):
        images[j] = eps.images[c.images[k]]
    return SitePermutation(sites=eps.target, images=tuple(images))


class DiscreteCell(BaseModel):
    """A square b o src = dst o a on sites."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    src: SiteEmbedding
    dst: SiteEmbedding
    a: SitePermutation
    b: SitePermutation

    def same_cell(self, other: "DiscreteCell") -> bool:
        return (self.src.same_map(other.src) and self.dst.same_map(other.dst)
                and self.a.same_map(other.a) and self.b.same_map(other.b))

    def to_json(self) -> Dict[str, Any]:
        return {"src": self.src.to_json(), "dst": self.dst.to_json(),
                "a": list(self.a.images), "b": list(self.b.images)}


def check_discrete_cell(eps0: SiteEmbedding, eps1: SiteEmbedding,
                        a: SitePermutation, b: SitePermutation) -> DiscreteCell:
    if not (eps0.source.same_as(eps1.source) and eps0.target.same_as(eps1.target)):
        raise EndpointMismatchError("embeddings of a discrete cell must share source and target sites")
    if not (a.sites.same_as(eps0.source) and b.sites.same_as(eps0.target)):
        raise EndpointMismatchError("cell permutations act on the wrong sites")
    for k in range(eps0.source.count):
        if b(eps0(k)) != eps1(a(k)):
            raise CertificationError(
                f"b o eps0 and eps1 o a differ at site {k}",
                {"counterexample": {"site": k, "b_eps0": b(eps0(k)), "eps1_a": eps1(a(k))}},
            )
    return DiscreteCell(src=eps0, dst=eps1, a=a, b=b)


def identity_discrete_cell(eps: SiteEmbedding) -> DiscreteCell:
    return check_discrete_cell(eps, eps, SitePermutation.identity(eps.source), SitePermutation.identity(eps.target))


def discrete_vcompose(f: DiscreteCell, g: DiscreteCell) -> DiscreteCell:
    if not f.dst.same_map(g.src):
        raise EndpointMismatchError("vertical composition needs f.dst = g.src")
    return check_discrete_cell(f.src, g.dst, g.a.compose(f.a), g.b.compose(f.b))


def discrete_hcompose(f: DiscreteCell, g: DiscreteCell) -> DiscreteCell:
    """(a, c o (b1^-1 o b0)^delta0) for f = (a, b0): eps0 -> eps1 and g = (b1, c): delta0 -> delta1."""
    if not f.src.target.same_as(g.src.source):
        raise EndpointMismatchError("discrete cells do not compose horizontally")
    inner = discrete_transport(g.a.inverse().compose(f.b), g.src)
    try:
        return check_discrete_cell(g.src.compose(f.src), g.dst.compose(f.dst), f.a, g.b.compose(inner))
    except CertificationError as exc:
        logger.error(f"discrete horizontal composite failed to certify: {exc.message}")
        raise CoherenceViolation("discrete horizontal composite is not a 2-cell", exc.details) from exc


def restrict_cell(cell: IntervalTwoCell, resolution: int) -> DiscreteCell:
    """The discrete cell of a certified interval cell at ``resolution`` on its domain."""
    eps0 = SiteEmbedding.from_pl(cell.src, resolution)
    eps1 = SiteEmbedding.from_pl(cell.dst, resolution)
    a = SitePermutation.from_diffeo(cell.a, eps0.source)
    b = SitePermutation.from_diffeo(cell.b, eps0.target)
    return check_discrete_cell(eps0, eps1, a, b)
