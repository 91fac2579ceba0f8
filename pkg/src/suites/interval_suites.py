"""
Sweeps over PL embeddings of intervals, their 2-cells and mapping classes.
"""
import logging
import random
from fractions import Fraction

import sympy

from ..errors import CertificationError, CoherenceViolation, CollarError, PLMapError
from ..interval import (
    InteriorDiffeo,
    MobiusMap,
    boundary_multiplier,
    check_interval_two_cell,
    class_compose,
    class_equal,
    fixed_collars,
    in_identity_component,
    interval_associativity_check,
    interval_vcompose,
    lorentz,
    lorentz_flow_check,
    mapping_class,
    pi0_emb,
    pl_compose,
    transport,
    transport_square,
)
from ..interval.pl import fmt
from ..models.reports import CriterionReport, SuitePhase
from ..utils.sampling import (
    interval_chain,
    random_diffeo,
    random_embedding,
    random_interval,
    random_interval_cell,
    random_lorentz_parameter,
    random_self_map,
)
from .base_suite import BaseSuite

logger = logging.getLogger(__name__)

FUNCTORIALITY_EVERY = 3


class IntervalSuite(BaseSuite):
    phase = SuitePhase.INTERVAL


class TransportSuite(IntervalSuite):
    """eps o c = c^eps o eps with c^eps collared, plus functoriality of transport."""

    criterion = 5
    name = "transport"

    def run(self, report: CriterionReport, rng: random.Random) -> None:
        smallest_collar = None
        functorial = 0
        for k in range(self.size('transport')):
            I, J, K = interval_chain(rng, 3)
            eps = random_embedding(I, J, rng)
            c = random_diffeo(I, rng)
            report.instances += 1
            try:
                pushed, disagreement = transport_square(c, eps)
            except (PLMapError, CollarError) as e:
                report.record_failure({"instance": k, "error": e.to_dict()})
                continue
            if disagreement is not None:
                report.record_failure({"instance": k, "point": fmt(disagreement),
                                       "c": c.to_json(), "eps": eps.to_json()})
                continue
            support = pushed.support()
            if support is not None and not eps.image.contains_interval(support):
                report.record_failure({"instance": k, "reason": "support leaves the image",
                                       "support": support.to_json()})
                continue
            if smallest_collar is None or pushed.collar < smallest_collar:
                smallest_collar = pushed.collar

            if k % FUNCTORIALITY_EVERY == 0:
                c2 = random_diffeo(I, rng)
                delta = random_embedding(J, K, rng)
                product_ok = transport(c.compose(c2), eps).same_map(transport(c, eps).compose(transport(c2, eps)))
                chain_ok = transport(pushed, delta).same_map(transport(c, pl_compose(delta, eps)))
                if product_ok and chain_ok:
                    functorial += 1
                else:
                    report.record_failure({"instance": k, "products": product_ok, "composites": chain_ok})
        report.statistics["smallest_collar"] = None if smallest_collar is None else fmt(smallest_collar)
        report.statistics["functoriality_checks"] = functorial


class IntervalCompositionSuite(IntervalSuite):
    """Horizontal and vertical composition of interval 2-cells, and associativity."""

    criterion = 6
    name = "interval_composition"

    def run(self, report: CriterionReport, rng: random.Random) -> None:
        vertical = 0
        for k in range(self.size('interval_composition')):
            I, J, K, L = interval_chain(rng, 4)
            report.instances += 1
            try:
                f = random_interval_cell(I, J, rng)
                g = random_interval_cell(J, K, rng)
                h = random_interval_cell(K, L, rng)
                result = interval_associativity_check(f, g, h)
                a2, b2 = random_diffeo(I, rng), random_diffeo(J, rng)
                eps2 = pl_compose(pl_compose(b2.pl, f.dst), a2.inverse().pl)
                interval_vcompose(f, check_interval_two_cell(f.dst, eps2, a2, b2))
                vertical += 1
            except (CertificationError, CoherenceViolation) as e:
                report.record_failure({"instance": k, "error": e.to_dict()})
                continue
            if not result.passed:
                report.record_failure({"instance": k, **(result.counterexample or {})})
            elif not pi0_emb(f.src, f.dst).equivalent:
                report.record_failure({"instance": k, "reason": "cell endpoints not connected in pi0",
                                       "cell": f.to_json()})
        report.statistics["vertical_composites"] = vertical


class MappingClassSuite(IntervalSuite):
    """Boundary germs compose with maps; Lorentz flows are nontrivial classes."""

    criterion = 7
    name = "mapping_classes"

    def _pl_classes(self, report: CriterionReport, rng: random.Random) -> None:
        trivial = 0
        for k in range(self.size('mapping_classes')):
            I = random_interval(rng)
            f, g = random_self_map(I, rng), random_self_map(I, rng)
            report.instances += 1
            composite = mapping_class(pl_compose(f, g))
            if not class_equal(composite, class_compose(mapping_class(f), mapping_class(g))):
                report.record_failure({"instance": k, "f": f.to_json(), "g": g.to_json()})
                continue
            left, right = fixed_collars(f)
            if in_identity_component(f) != (left > 0 and right > 0):
                report.record_failure({"instance": k, "reason": "identity component disagrees with collars",
                                       "f": f.to_json()})
                continue
            if in_identity_component(f):
                InteriorDiffeo.from_map(f)
                trivial += 1
        report.statistics["trivial_classes"] = trivial

    @staticmethod
    def _symbolic_derivative(g: MobiusMap) -> Fraction:
        x = sympy.Symbol('x')
        c, s = sympy.Rational(g.c.numerator, g.c.denominator), sympy.Rational(g.s.numerator, g.s.denominator)
        value = sympy.diff((c * x + s) / (s * x + c), x).subs(x, 1)
        value = sympy.Rational(value)
        return Fraction(int(value.p), int(value.q))

    def _lorentz(self, report: CriterionReport, rng: random.Random) -> None:
        if not mapping_class(lorentz(0)).is_identity():
            report.record_failure({"u": "0", "reason": "Lorentz map at u = 0 is not trivial"})
        for k in range(self.size('lorentz')):
            u1, u2 = random_lorentz_parameter(rng), random_lorentz_parameter(rng)
            report.instances += 1
            result = lorentz_flow_check(u1, u2)
            if not result.passed:
                report.record_failure({"instance": k, **(result.counterexample or {})})
                continue
            g = lorentz(u1)
            expected = boundary_multiplier(u1) ** 2
            symbolic = self._symbolic_derivative(g)
            if symbolic != expected or g.derivative(1) != expected:
                report.record_failure({"instance": k, "u": fmt(u1), "symbolic": fmt(symbolic),
                                       "expected": fmt(expected)})
                continue
            if mapping_class(g).is_identity():
                report.record_failure({"instance": k, "u": fmt(u1), "reason": "trivial class for u != 0"})

    def run(self, report: CriterionReport, rng: random.Random) -> None:
        self._pl_classes(report, rng)
        self._lorentz(report, rng)
        report.statistics["lorentz_instances"] = self.size('lorentz')
