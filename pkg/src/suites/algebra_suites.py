"""
Sweeps over the unit groupoid of finite-dimensional algebras.
"""
import logging
import random

from ..algebra import SigmaTable, enumerate_units
from ..errors import CertificationError, CoherenceViolation
from ..groupoid import (
    associativity_check,
    conjugating_unit,
    enumerate_conjugators,
    hcompose,
    identity_cell,
    interchange_probe,
    invert_cell,
    vcompose,
)
from ..kernel import GAUSS, ScalarField, get_field, prime_field
from ..models.reports import CriterionReport, SuitePhase
from ..utils.config import section
from ..utils.sampling import (
    diagonal_algebra,
    matrix_algebra,
    random_automorphism,
    random_cell,
    random_cell_chain,
    random_pi0_pair,
)
from .base_suite import BaseSuite

logger = logging.getLogger(__name__)

INTERCHANGE_PROBES = 50


class AlgebraSuite(BaseSuite):
    phase = SuitePhase.ALGEBRA

    @property
    def sweep_field(self) -> ScalarField:
        """The F_p of the enumeration sweeps; Q(i) falls back to F_5."""
        field = get_field(section(self.config, 'selftest').get('field') or 'fp:5')
        return field if field.is_finite else prime_field(5)

    @property
    def enumeration_limit(self) -> int:
        return section(self.config, 'groupoid').get('enumeration_limit', 4096)


class SigmaOrderSuite(AlgebraSuite):
    """sigma_{ab} = sigma_b o sigma_a over every pair of units of Mat2(F_p)."""

    criterion = 1
    name = "sigma_order_law"

    def run(self, report: CriterionReport, rng: random.Random) -> None:
        algebra = matrix_algebra(2, self.sweep_field)
        units = list(enumerate_units(algebra, limit=self.enumeration_limit))
        p = self.sweep_field.modulus
        expected = (p * p - 1) * (p * p - p)
        report.statistics["units"] = len(units)
        report.statistics["expected_units"] = expected
        if len(units) != expected:
            report.record_failure({"reason": "unit count", "found": len(units), "expected": expected})
            return
        self.log_action(f"sweeping {len(units) ** 2} pairs of units of {algebra.name}")
        result = SigmaTable(algebra, units).order_law_sweep()
        report.instances = result.details.get("pairs", 0)
        if not result.passed:
            report.record_failure(result.counterexample or {})


class HorizontalCompositionSuite(AlgebraSuite):
    """Certified horizontal composites over F_p and Q(i), plus interchange statistics."""

    criterion = 2
    name = "hcompose"

    def _sweep(self, report: CriterionReport, field: ScalarField, count: int, rng: random.Random) -> int:
        algebra = matrix_algebra(2, field)
        certified = 0
        for k in range(count):
            f, g = random_cell_chain(algebra, 2, rng, self.height)
            report.instances += 1
            try:
                hcompose(f, g)
                certified += 1
            except (CertificationError, CoherenceViolation) as e:
                report.record_failure({"field": field.descriptor, "instance": k, "error": e.to_dict(),
                                       "f": f.to_json(), "g": g.to_json()})
        return certified

    def _interchange(self, report: CriterionReport, rng: random.Random) -> None:
        algebra = matrix_algebra(2, self.sweep_field)
        strict = groupoid_laws = 0
        for k in range(INTERCHANGE_PROBES):
            f0 = random_cell(random_automorphism(algebra, rng, "phi", self.height), rng, height=self.height)
            f1 = random_cell(f0.dst, rng, height=self.height)
            g0 = random_cell(random_automorphism(algebra, rng, "psi", self.height), rng, height=self.height)
            g1 = random_cell(g0.dst, rng, height=self.height)
            try:
                probe = interchange_probe((f0, f1, g0, g1))
            except (CertificationError, CoherenceViolation) as e:
                report.record_failure({"interchange": k, "error": e.to_dict()})
                continue
            strict += probe.details["strict_equal"]
            if vcompose(f0, invert_cell(f0)).same_pair(identity_cell(f0.src)):
                groupoid_laws += 1
            else:
                report.record_failure({"groupoid_inverse": k, "f": f0.to_json()})
        report.statistics["interchange_probes"] = INTERCHANGE_PROBES
        report.statistics["interchange_strict_rate"] = strict / INTERCHANGE_PROBES
        report.statistics["inverse_law_holds"] = groupoid_laws

    def run(self, report: CriterionReport, rng: random.Random) -> None:
        report.statistics["certified_fp"] = self._sweep(report, self.sweep_field, self.size('hcompose_fp'), rng)
        report.statistics["certified_gauss"] = self._sweep(report, GAUSS, self.size('hcompose_gauss'), rng)
        self._interchange(report, rng)


class AssociativitySuite(AlgebraSuite):
    criterion = 3
    name = "associativity"

    def run(self, report: CriterionReport, rng: random.Random) -> None:
        algebra = matrix_algebra(2, self.sweep_field)
        for k in range(self.size('associativity')):
            f, g, h = random_cell_chain(algebra, 3, rng, self.height)
            report.instances += 1
            try:
                result = associativity_check(f, g, h)
            except CoherenceViolation as e:
                report.record_failure({"instance": k, "error": e.to_dict()})
                continue
            if not result.passed:
                report.record_failure({"instance": k, **(result.counterexample or {})})


class Pi0Suite(AlgebraSuite):
    """Decide pi0 of Hom(D2, Mat2) by intertwiner search and compare with brute force."""

    criterion = 4
    name = "pi0"

    def run(self, report: CriterionReport, rng: random.Random) -> None:
        field = self.sweep_field
        source, target = diagonal_algebra(field), matrix_algebra(2, field)
        attempts = section(self.config, 'groupoid').get('unit_search_attempts', 64)
        units = sum(1 for _ in enumerate_units(target, limit=self.enumeration_limit))
        report.statistics["units_enumerated"] = units
        positive = negative = 0
        for k in range(self.size('pi0')):
            phi0, phi1 = random_pi0_pair(source, target, rng)
            found = conjugating_unit(phi0, phi1, rng=rng, attempts=attempts,
                                     enumeration_limit=self.enumeration_limit)
            brute = next(enumerate_conjugators(phi0, phi1, limit=self.enumeration_limit), None)
            report.instances += 1
            if (found is None) != (brute is None):
                report.record_failure({"instance": k, "phi0": phi0.to_json(), "phi1": phi1.to_json(),
                                       "search": found is not None, "enumeration": brute is not None})
            elif found is None:
                negative += 1
            else:
                positive += 1
        report.statistics["conjugate_pairs"] = positive
        report.statistics["non_conjugate_pairs"] = negative
        if not (positive and negative):
            report.notes.append("sample did not cover both outcomes")
