"""
Bogoliubov automorphisms of site permutations and their inner witnesses.

Every automorphism of the (central simple) CAR algebra is inner, so each site
permutation a has a unit w(a) with sigma_{w(a)} = alpha_a, unique up to a
scalar. Witnesses are normalized so the first nonzero coordinate is 1; the
composition law w(a0 o a1) ~ w(a1) w(a0) then holds up to a recorded scalar.
"""
from __future__ import annotations

import logging
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict

from ..algebra import AlgHom, Algebra, AlgebraElement, Unit, inner_aut
from ..errors import CertificationError, EndpointMismatchError, NoUnitFoundError
from ..interval.pl import InteriorDiffeo
from ..kernel import GAUSS, GaussianRational, Matrix
from ..kernel.linalg import intertwiner_kernel, invert, is_invertible
from ..models.verdict import CheckResult
from .fermions import DEFAULT_SITE_CAP, quantize_sites
from .sites import SitePermutation, SiteSet

logger = logging.getLogger(__name__)


class InnerWitness(BaseModel):
    """A unit u with sigma_u = automorphism on every generator."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    automorphism: AlgHom
    unit: Unit
    solution_dim: int = 1
    scalar_defect: GaussianRational = GaussianRational(1)

    def defect_against(self, product: Unit) -> Optional["InnerWitness"]:
        """A copy recording lambda with unit = lambda * product, or None when they are not proportional."""
        c = self.unit.matrix.scalar_ratio(product.matrix)
        if c is None:
            return None
        return self.model_copy(update={"scalar_defect": GAUSS.coerce(c)})

    def to_json(self) -> Dict[str, Any]:
        return {
            "automorphism": self.automorphism.name,
            "unit": self.unit.to_json(),
            "solution_dim": self.solution_dim,
            "scalar_defect": str(self.scalar_defect),
        }


def _generator_positions(algebra: Algebra) -> List[int]:
    if algebra.words is None:
        return list(range(algebra.dim))
    return [k for _, k in sorted((w[0], k) for k, w in enumerate(algebra.words) if len(w) == 1)]


def bogoliubov(a: Union[SitePermutation, InteriorDiffeo], resolution: Optional[int] = None,
               site_cap: int = DEFAULT_SITE_CAP) -> AlgHom:
    """The automorphism sending the generator pair at site s to the pair at a(s)."""
    if isinstance(a, InteriorDiffeo):
        if resolution is None:
            raise EndpointMismatchError("a diffeomorphism needs a resolution to act on sites")
        a = SitePermutation.from_diffeo(a, SiteSet(interval=a.interval, resolution=resolution))
    car = quantize_sites(a.sites, site_cap)
    images: List[Matrix] = []
    for s in range(a.sites.count):
        images.extend(car.generator_pair(a(s)))
    return AlgHom.from_generator_images(car.algebra, car.algebra, images, name=f"alpha{list(a.images)}")


def _normalized(algebra: Algebra, m: Matrix) -> AlgebraElement:
    x = algebra.element(m)
    pivot = next(c for c in x.coords if c)
    return x.scale(algebra.field.inv(pivot))


def inner_witness(alpha: AlgHom) -> InnerWitness:
    """Solve gamma_k u = u alpha(gamma_k) over the generators for an invertible u."""
    algebra = alpha.source
    if alpha.target != algebra:
        raise EndpointMismatchError(f"{alpha.name} is not an automorphism")
    positions = _generator_positions(algebra)
    generators = [algebra.basis[k] for k in positions]
    images = [alpha.images[k].matrix for k in positions]
    solutions = intertwiner_kernel(generators, images)
    candidates = [m for m in solutions if algebra.coordinates(m) is not None]
    for m in candidates:
        if is_invertible(m):
            x = _normalized(algebra, m)
            u = Unit(x, algebra.element(invert(x.matrix)), check=False)
            break
    else:
        logger.error(f"no invertible intertwiner for {alpha.name} in {algebra.name}")
        raise NoUnitFoundError(
            f"{alpha.name} has no inner witness; {algebra.name} is not central simple",
            {"solution_dim": len(solutions)},
        )
    if len(candidates) != 1:
        logger.warning(f"intertwiner space of {alpha.name} has dimension {len(candidates)}, expected 1")
    for k in positions:
        if inner_aut(u, algebra.basis_element(k)) != alpha.images[k]:
            raise CertificationError(
                f"sigma_u disagrees with {alpha.name} on generator {algebra.words[k] if algebra.words else k}",
                {"counterexample": {"basis_index": k}},
            )
    logger.debug(f"inner witness for {alpha.name} certified on {len(positions)} generators")
    return InnerWitness(automorphism=alpha, unit=u, solution_dim=len(candidates))


WITNESS_CACHE_SIZE = 2048


@lru_cache(maxsize=WITNESS_CACHE_SIZE)
def permutation_witness(a: SitePermutation, site_cap: int = DEFAULT_SITE_CAP) -> InnerWitness:
    """w(a) for a site permutation; cached per site set and permutation."""
    return inner_witness(bogoliubov(a, site_cap=site_cap))


def witness_sample(witness: InnerWitness, rng: Any, samples: int = 100, height: int = 2) -> CheckResult:
    """sigma_u(x) = alpha(x) on random elements."""
    alpha = witness.automorphism
    for k in range(samples):
        x = alpha.source.random_element(rng, height)
        if inner_aut(witness.unit, x) != alpha(x):
            return CheckResult(name="witness_sample", passed=False,
                               counterexample={"sample": k, "x": x.to_json()})
    return CheckResult(name="witness_sample", passed=True, details={"samples": samples})


def antihom_check(a0: SitePermutation, a1: SitePermutation, site_cap: int = DEFAULT_SITE_CAP) -> CheckResult:
    """Compare w(a0 o a1) with w(a1) w(a0) and with w(a0) w(a1).

    Passes when the reversed product agrees up to a scalar; the scalar and the
    on-the-nose status of both orders go into the details.
    """
    if not a0.sites.same_as(a1.sites):
        raise EndpointMismatchError("antihom_check needs permutations of one site set")
    u0, u1 = permutation_witness(a0, site_cap).unit, permutation_witness(a1, site_cap).unit
    composite = permutation_witness(a0.compose(a1), site_cap)
    reversed_form = composite.defect_against(u1 * u0)
    same_form = composite.defect_against(u0 * u1)
    reversed_scalar = None if reversed_form is None else reversed_form.scalar_defect
    same_scalar = None if same_form is None else same_form.scalar_defect
    details = {
        "a0": list(a0.images),
        "a1": list(a1.images),
        "permutations_commute": a0.compose(a1).same_map(a1.compose(a0)),
        "reversed": {
            "scalar": None if reversed_scalar is None else str(reversed_scalar),
            "on_the_nose": reversed_scalar == GaussianRational(1),
        },
        "same_order": {
            "scalar": None if same_scalar is None else str(same_scalar),
            "on_the_nose": same_scalar == GaussianRational(1),
        },
    }
    if reversed_scalar is None:
        return CheckResult(name="antihom", passed=False, counterexample=details)
    return CheckResult(name="antihom", passed=True, witness={"defect": str(reversed_scalar)}, details=details)


def defect_table(permutations: Sequence[SitePermutation], site_cap: int = DEFAULT_SITE_CAP) -> CheckResult:
    """The scalar defects lambda(g, h) with w(g o h) = lambda w(h) w(g), over all pairs.

    Passes when every entry is a scalar and, on every noncommuting pair, the
    same-order product fails to be proportional.
    """
    table: Dict[str, Optional[str]] = {}
    same_order_holds: List[str] = []
    failures: List[str] = []
    for i, g in enumerate(permutations):
        for j, h in enumerate(permutations):
            report = antihom_check(g, h, site_cap)
            key = f"{i},{j}"
            table[key] = report.details["reversed"]["scalar"]
            if not report.passed:
                failures.append(key)
            if not report.details["permutations_commute"] and report.details["same_order"]["scalar"] is not None:
                same_order_holds.append(key)
    details = {
        "permutations": [list(p.images) for p in permutations],
        "table": table,
        "noncommuting_same_order_proportional": same_order_holds,
    }
    if failures or same_order_holds:
        details["failures"] = failures
        return CheckResult(name="defect_table", passed=False, counterexample=details)
    return CheckResult(name="defect_table", passed=True, witness={"table": table}, details=details)
