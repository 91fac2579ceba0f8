import logging
import random

from ..models.reports import CriterionReport, SuitePhase
from ..symbolic import corpus_scripts, verify_script
from ..utils.config import section
from .base_suite import BaseSuite

logger = logging.getLogger(__name__)


class SymbolicCorpusSuite(BaseSuite):
    """Every shipped script proven within the depth bound, with replayed traces and F_5 soundness.

    Goals in a variants group are exempt from the proof requirement; instead
    exactly one member of each group must be proven.
    """

    criterion = 11
    name = "symbolic_corpus"
    phase = SuitePhase.SYMBOLIC

    def run(self, report: CriterionReport, rng: random.Random) -> None:
        options = section(self.config, 'symbolic')
        depth = options.get('depth', 8)
        max_states = options.get('max_states', 20000)
        per_script = {}
        for path in corpus_scripts():
            result = verify_script(path, depth=depth, max_states=max_states,
                                   instantiations=self.size('instantiations'), rng=rng)
            in_variants = {label for group in result.variants for label in group.goals}
            for goal in result.goals:
                report.instances += 1
                where = {"script": result.script, "goal": goal.goal}
                if not goal.proven:
                    if goal.goal not in in_variants:
                        report.record_failure({**where, "status": goal.status.value, "reason": goal.reason})
                    continue
                if goal.replayed is not True:
                    report.record_failure({**where, "reason": "trace does not replay"})
                soundness = result.soundness.get(goal.goal)
                if soundness is None or not soundness["passed"]:
                    report.record_failure({**where, "reason": "instantiation check failed",
                                           "soundness": soundness})
            for group in result.variants:
                if len(group.proven) != 1:
                    report.record_failure({"script": result.script, "variants": group.goals,
                                           "proven": group.proven})
            per_script[result.script] = {
                "goals": len(result.goals),
                "proven": sum(g.proven for g in result.goals),
                "states_explored": sum(g.states_explored for g in result.goals),
                "variant_groups": len(result.variants),
            }
            self.log_action(f"verified {result.script}", per_script[result.script])
        report.statistics["scripts"] = per_script
        report.statistics["depth"] = depth
