"""
Pushing composable interval 2-cells through the quantization functor.

For f = (a, b0): eps0 -> eps1 in Emb(I, J) and g = (b1, c): delta0 -> delta1
in Emb(J, K), with E_i = Q(eps_i), D_i = Q(delta_i) and bold letters for the
witnesses, the image cells (w(a), w(b0)): E0 -> E1 and (w(b1), w(c)): D0 -> D1
must be algebra 2-cells, and the witness of the composite b-component
c o (b1^-1 b0)^delta0 is compared with four products:

- ``conclusion``: D0(w(b1^-1 b0)) c
- ``diagram``: c D1(b1^-1 b0), the b-component of the algebra composite
- ``literal_product``: D0(b1^-1 b0) c
- ``literal_exchange``: D1(b1^-1 b0) c^-1 against c^-1 D0(b1^-1 b0)

The first two must hold up to a scalar; the last two are reported.
"""
from __future__ import annotations

import logging
from typing import Any, Dict, Optional, Tuple, Union

from ..errors import CertificationError, SiteIncompatibleError
from ..groupoid import TwoCell, check_two_cell, hcompose
from ..interval.cells import IntervalTwoCell, interval_hcompose
from ..kernel import GAUSS, Matrix
from ..models.verdict import CheckResult
from .fermions import DEFAULT_SITE_CAP, induced_hom
from .sites import DiscreteCell, discrete_hcompose, restrict_cell
from .witnesses import permutation_witness

logger = logging.getLogger(__name__)

CellLike = Union[DiscreteCell, IntervalTwoCell]


def _discrete(cell: CellLike, resolution: Optional[int]) -> DiscreteCell:
    if isinstance(cell, DiscreteCell):
        return cell
    if resolution is None:
        raise SiteIncompatibleError("an interval cell needs a resolution to be quantized")
    return restrict_cell(cell, resolution)


def _form(lhs: Matrix, rhs: Matrix) -> Dict[str, Any]:
    c = lhs.scalar_ratio(rhs)
    return {
        "up_to_scalar": c is not None,
        "scalar": None if c is None else str(GAUSS.coerce(c)),
        "on_the_nose": lhs == rhs,
    }


def quantize_cell(cell: DiscreteCell, site_cap: int = DEFAULT_SITE_CAP) -> TwoCell:
    """(w(a), w(b)): Q(src) -> Q(dst), certified."""
    return check_two_cell(
        induced_hom(cell.src, site_cap=site_cap),
        induced_hom(cell.dst, site_cap=site_cap),
        permutation_witness(cell.a, site_cap).unit,
        permutation_witness(cell.b, site_cap).unit,
    )


def two_functor_check(f: CellLike, g: CellLike, resolution: Optional[int] = None,
                      site_cap: int = DEFAULT_SITE_CAP) -> CheckResult:
    """Quantize f in Emb(I, J) and g in Emb(J, K) and compare composites.

    ``resolution`` is the resolution of I; J and K are taken at the same mesh.
    When both cells are interval cells the quantized interval composite is
    compared with the algebra composite as well.
    """
    interval_pair = (f, g) if isinstance(f, IntervalTwoCell) and isinstance(g, IntervalTwoCell) else None
    f = _discrete(f, resolution)
    if isinstance(g, IntervalTwoCell):
        g = restrict_cell(g, f.src.target.resolution)

    try:
        f_image = quantize_cell(f, site_cap)
        g_image = quantize_cell(g, site_cap)
    except CertificationError as exc:
        logger.info(f"quantized cell failed to certify: {exc.message}")
        return CheckResult(name="two_functor", passed=False,
                           counterexample={"stage": "image_cells", **exc.details})

    D0, D1 = g_image.src, g_image.dst
    b0, b1, c = f_image.b, g_image.a, g_image.b
    composite = discrete_hcompose(f, g)
    target_witness = permutation_witness(composite.b, site_cap).unit
    y = permutation_witness(g.a.inverse().compose(f.b), site_cap).unit
    ratio = b1.invert() * b0

    conclusion = D0.apply_unit(y) * c
    diagram = c * D1.apply_unit(ratio)
    literal_product = D0.apply_unit(ratio) * c
    forms = {
        "conclusion": _form(target_witness.matrix, conclusion.matrix),
        "diagram": _form(target_witness.matrix, diagram.matrix),
        "literal_product": _form(target_witness.matrix, literal_product.matrix),
        "literal_exchange": _form((D1.apply_unit(ratio) * c.invert()).matrix,
                                  (c.invert() * D0.apply_unit(ratio)).matrix),
    }

    algebra_composite = hcompose(f_image, g_image)
    image_composite = quantize_cell(composite, site_cap)
    same_homs = algebra_composite.src == image_composite.src and algebra_composite.dst == image_composite.dst
    functorial = (induced_hom(composite.src, site_cap=site_cap) == D0.compose(f_image.src)
                  and induced_hom(composite.dst, site_cap=site_cap) == D1.compose(f_image.dst))
    hcompose_match = _form(image_composite.b.matrix, algebra_composite.b.matrix)
    details: Dict[str, Any] = {
        "forms": forms,
        "hcompose": {
            "same_homs": same_homs,
            "a_equal": algebra_composite.a == image_composite.a,
            **hcompose_match,
        },
        "functorial": functorial,
    }
    if interval_pair is not None:
        details["interval_hcompose"] = _interval_composite(interval_pair, f, composite, algebra_composite, site_cap)
    passed = (forms["conclusion"]["up_to_scalar"] and forms["diagram"]["up_to_scalar"]
              and same_homs and functorial and algebra_composite.a == image_composite.a
              and hcompose_match["up_to_scalar"]
              and details.get("interval_hcompose", {}).get("agrees", True))
    if passed:
        return CheckResult(name="two_functor", passed=True,
                           witness={"composite": composite.to_json(),
                                    "defect": forms["conclusion"]["scalar"]},
                           details=details)
    logger.warning(f"quantized composite disagrees with the algebra composite: {details}")
    return CheckResult(name="two_functor", passed=False, counterexample=details)


def _interval_composite(pair: Tuple[IntervalTwoCell, IntervalTwoCell], f: DiscreteCell, composite: DiscreteCell,
                        algebra_composite: TwoCell, site_cap: int) -> Dict[str, Any]:
    """Quantize interval_hcompose(f, g) and compare it with the composite of the image cells."""
    restricted = restrict_cell(interval_hcompose(*pair), f.src.source.resolution)
    image = quantize_cell(restricted, site_cap)
    same_homs = image.src == algebra_composite.src and image.dst == algebra_composite.dst
    b_match = _form(image.b.matrix, algebra_composite.b.matrix)
    a_equal = image.a == algebra_composite.a
    matches_discrete = restricted.same_cell(composite)
    return {
        "same_homs": same_homs,
        "a_equal": a_equal,
        "matches_discrete": matches_discrete,
        **b_match,
        "agrees": same_homs and a_equal and matches_discrete and b_match["up_to_scalar"],
    }
