from .verdict import CheckResult, Verdict, VerdictStatus
from .reports import CriterionReport, SelfTestReport, SuitePhase

__all__ = ['CheckResult', 'Verdict', 'VerdictStatus', 'CriterionReport', 'SelfTestReport', 'SuitePhase']
