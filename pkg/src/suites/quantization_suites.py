"""
Sweeps over the fermionic quantization of site-compatible cells and over modular data.
"""
import logging
import random
from fractions import Fraction
from typing import List, Set, Tuple

from ..errors import CertificationError, CoherenceViolation, SiteIncompatibleError
from ..interval import Interval
from ..models.reports import CriterionReport, SuitePhase
from ..quantization import (
    ModularData,
    SitePermutation,
    SiteSet,
    all_permutations,
    defect_table,
    kms_check,
    modular_group_check,
    permutation_witness,
    quantize_cell,
    restrict_cell,
    reversed_convention_counterexample,
    two_functor_check,
    witness_sample,
)
from ..utils.config import section
from ..utils.sampling import (
    random_density,
    random_discrete_cell,
    random_gauss_matrix,
    random_site_compatible_cell,
)
from .base_suite import BaseSuite

logger = logging.getLogger(__name__)

WITNESS_RESOLUTIONS = (2, 3, 4)
WITNESS_SAMPLES = 10
# Mat_8 is the largest image algebra the two-functor sweep builds
MAX_RESOLUTION = 4
MODULAR_GROUP_EVERY = 10


def unit_sites(resolution: int, extra: int = 0, label: str = "I") -> SiteSet:
    """Sites of [0, (r + extra)/r] at mesh 1/r."""
    right = Fraction(resolution + extra, resolution)
    return SiteSet(interval=Interval(left=0, right=right, label=label), resolution=resolution + extra)


class QuantizationSuite(BaseSuite):
    phase = SuitePhase.QUANTIZATION

    @property
    def site_cap(self) -> int:
        return section(self.config, 'quantization').get('site_cap', 6)


class WitnessSuite(QuantizationSuite):
    """Inner witnesses for every site permutation, quantized cells and the 2-functor comparison."""

    criterion = 8
    name = "quantization"

    def _witnesses(self, report: CriterionReport, rng: random.Random) -> None:
        counts = {}
        for r in WITNESS_RESOLUTIONS:
            permutations = list(all_permutations(unit_sites(r)))
            counts[str(r)] = len(permutations)
            for a in permutations:
                witness = permutation_witness(a, self.site_cap)
                result = witness_sample(witness, rng, samples=WITNESS_SAMPLES, height=1)
                report.instances += 1
                if not result.passed or witness.solution_dim != 1:
                    report.record_failure({"resolution": r, "permutation": list(a.images),
                                           "solution_dim": witness.solution_dim,
                                           **(result.counterexample or {})})
        report.statistics["witnessed_permutations"] = counts

    def _shape(self, rng: random.Random) -> Tuple[int, int, int]:
        r = rng.randint(2, MAX_RESOLUTION - 1)
        e1 = rng.randint(0, MAX_RESOLUTION - r)
        e2 = rng.randint(0, MAX_RESOLUTION - r - e1)
        return r, e1, e2

    def _two_functor(self, report: CriterionReport, rng: random.Random) -> None:
        interval_cells = 0
        defects: Set[str] = set()
        for k in range(self.size('two_functor')):
            r, e1, e2 = self._shape(rng)
            J, K = unit_sites(r, e1, "J"), unit_sites(r, e1 + e2, "K")
            report.instances += 1
            try:
                if k % 2 == 0:
                    f = random_site_compatible_cell(r, e1, rng)
                    g = random_site_compatible_cell(r, e2, rng, start=e1, labels=("J", "K"))
                    quantize_cell(restrict_cell(f, r), self.site_cap)
                    interval_cells += 1
                else:
                    f = random_discrete_cell(unit_sites(r), J, rng)
                    g = random_discrete_cell(J, K, rng)
                result = two_functor_check(f, g, resolution=r, site_cap=self.site_cap)
            except (CertificationError, CoherenceViolation, SiteIncompatibleError) as e:
                report.record_failure({"instance": k, "resolution": r, "error": e.to_dict()})
                continue
            if result.passed:
                defects.add(result.witness["defect"])
            else:
                report.record_failure({"instance": k, "resolution": r, **(result.counterexample or {})})
        report.statistics["two_functor_instances"] = self.size('two_functor')
        report.statistics["quantized_interval_cells"] = interval_cells
        report.statistics["composite_defects"] = sorted(defects)

    def run(self, report: CriterionReport, rng: random.Random) -> None:
        self._witnesses(report, rng)
        self._two_functor(report, rng)


class DefectTableSuite(QuantizationSuite):
    """w(g o h) = lambda w(h) w(g) everywhere, and never in the same order on noncommuting pairs."""

    criterion = 9
    name = "defect_table"

    def _table(self, report: CriterionReport, label: str, permutations: List[SitePermutation]) -> int:
        result = defect_table(permutations, self.site_cap)
        report.instances += len(permutations) ** 2
        report.statistics[label] = result.details["table"]
        if not result.passed:
            report.record_failure({"table": label, **(result.counterexample or {})})
        return sum(1 for g in permutations for h in permutations
                   if not g.compose(h).same_map(h.compose(g)))

    def run(self, report: CriterionReport, rng: random.Random) -> None:
        full = list(all_permutations(unit_sites(3)))
        sites = unit_sites(4)
        generators = [SitePermutation.transposition(sites, i, i + 1) for i in range(sites.count - 1)]
        noncommuting = self._table(report, "full_group_r3", full)
        noncommuting += self._table(report, "generators_r4", generators)
        report.statistics["noncommuting_pairs"] = noncommuting
        if not noncommuting:
            report.record_failure({"reason": "no noncommuting pair exercised the order check"})


class KmsSuite(BaseSuite):
    """KMS for rho x rho^-1 over Mat2 and Mat3, with the reversed convention refuted."""

    criterion = 10
    name = "kms"
    phase = SuitePhase.MODULAR

    def run(self, report: CriterionReport, rng: random.Random) -> None:
        reversed_passes = group_checks = 0
        for k in range(self.size('kms')):
            n = 2 + k % 2
            d = ModularData(state=random_density(n, rng))
            x, y = random_gauss_matrix(n, rng), random_gauss_matrix(n, rng)
            report.instances += 1
            result = kms_check(d, x, y)
            if not result.passed:
                report.record_failure({"instance": k, "state": d.to_json(), **(result.counterexample or {})})
                continue
            reversed_passes += kms_check(d, x, y, convention="reversed").passed
            if k % MODULAR_GROUP_EVERY == 0:
                group_checks += 1
                power = modular_group_check(d, x, rng.randint(-2, 2), rng.randint(-2, 2))
                if not power.passed:
                    report.record_failure({"instance": k, **(power.counterexample or {})})
        counterexample = reversed_convention_counterexample()
        if counterexample.passed:
            report.record_failure({"reason": "reversed convention satisfied the KMS identity",
                                   **counterexample.details})
        report.statistics["reversed_convention_refuted"] = not counterexample.passed
        report.statistics["reversed_convention_passes"] = reversed_passes
        report.statistics["modular_group_checks"] = group_checks
