"""
Error hierarchy shared by every module.

Each error carries a stable ``code`` and a ``details`` dict so suites and the
CLI can collect failures as plain dicts, the same way phase nodes collect
their ``errors`` lists.
"""
from typing import Any, Dict, Optional


class VerifierError(Exception):
    """Base class for all domain errors."""

    code = "verifier_error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {"code": self.code, "message": self.message, "details": self.details}


class FieldMismatchError(VerifierError):
    code = "field_mismatch"


class DimensionMismatchError(VerifierError):
    code = "dimension_mismatch"


class NotAUnitError(VerifierError):
    code = "not_a_unit"


class NotInAlgebraError(VerifierError):
    code = "not_in_algebra"


class ParentMismatchError(VerifierError):
    code = "parent_mismatch"


class ClosureOverflowError(VerifierError):
    code = "closure_overflow"


class HomomorphismError(VerifierError):
    """Raised when a proposed linear map is not a unital algebra homomorphism."""

    code = "not_a_homomorphism"


class EndpointMismatchError(VerifierError):
    code = "endpoint_mismatch"


class CertificationError(VerifierError):
    """A defining equation failed; ``details['counterexample']`` names where."""

    code = "certification_failed"


class CoherenceViolation(VerifierError):
    """A composite of certified cells failed to certify."""

    code = "coherence_violation"


class NoUnitFoundError(VerifierError):
    code = "no_unit_found"


class PLMapError(VerifierError):
    code = "pl_map_invalid"


class CollarError(VerifierError):
    code = "collar_invalid"


class EndpointNotFixedError(VerifierError):
    code = "endpoint_not_fixed"


class SiteIncompatibleError(VerifierError):
    code = "site_incompatible"


class SiteCapError(VerifierError):
    code = "site_cap_exceeded"


class StateError(VerifierError):
    code = "invalid_state"


class ExpressionSyntaxError(VerifierError):
    code = "syntax_error"

    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at byte {offset}", {"offset": offset, "text": text})
        self.offset = offset


class ScriptError(VerifierError):
    code = "script_error"


class InstanceFileError(VerifierError):
    code = "instance_file_error"
