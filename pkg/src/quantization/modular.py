"""
Finite-dimensional modular theory of a faithful state on Mat_N.

For a density matrix rho the modular flow continued to the KMS point is
E(x) = rho x rho^-1, pinned by the exact identity
Tr(rho x E(y)) = Tr(rho y x). E is conjugation by the unit rho^-1, so its class
modulo inner automorphisms is trivial at every finite dimension.
"""
from __future__ import annotations

import logging
from functools import lru_cache
from typing import Any, Dict, Literal, Union

from pydantic import BaseModel, ConfigDict, field_validator

from ..algebra import Algebra, AlgebraElement, Unit, full_matrix_algebra, inner_aut
from ..errors import DimensionMismatchError, StateError
from ..kernel import GAUSS, GaussianRational, Matrix
from ..kernel.linalg import determinant, invert
from ..models.verdict import CheckResult

logger = logging.getLogger(__name__)

Convention = Literal["standard", "reversed"]


@lru_cache(maxsize=None)
def _matrix_algebra(n: int) -> Algebra:
    return full_matrix_algebra(n, GAUSS, name=f"Mat{n}")


class ModularData(BaseModel):
    """A positive-definite density matrix of trace 1 over Q(i)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    state: Matrix

    @field_validator("state")
    @classmethod
    def _faithful_state(cls, rho: Matrix) -> Matrix:
        if rho.field != GAUSS:
            raise StateError(f"a state needs an ordered field, got {rho.field.descriptor}")
        if not rho.is_square:
            raise StateError(f"state of shape {rho.shape} is not square")
        if rho.conjugate_transpose() != rho:
            raise StateError("state is not Hermitian", {"state": rho.to_json()})
        if rho.trace_raw() != GaussianRational(1):
            raise StateError(f"state has trace {rho.trace()}, expected 1", {"state": rho.to_json()})
        for k in range(1, rho.rows + 1):
            minor = Matrix.from_rows([row[:k] for row in rho.to_rows()[:k]], GAUSS)
            value = determinant(minor)
            if value.im != 0 or value.re <= 0:
                raise StateError(
                    f"leading principal minor {k} is {value}; state is not positive definite",
                    {"minor": k, "value": str(value)},
                )
        return rho

    @property
    def size(self) -> int:
        return self.state.rows

    @property
    def algebra(self) -> Algebra:
        return _matrix_algebra(self.size)

    @property
    def inverse_state(self) -> Matrix:
        return invert(self.state)

    def to_json(self) -> Dict[str, Any]:
        return {"state": self.state.to_json()}


def _matrix(x: Union[Matrix, AlgebraElement]) -> Matrix:
    return x.matrix if isinstance(x, AlgebraElement) else x


def _check_shape(d: ModularData, *xs: Matrix) -> None:
    for x in xs:
        if x.shape != d.state.shape:
            raise DimensionMismatchError(f"element of shape {x.shape} for a state of shape {d.state.shape}")


def modular_continuation(d: ModularData, x: Union[Matrix, AlgebraElement],
                         convention: Convention = "standard") -> Matrix:
    """E(x) = rho x rho^-1; the reversed convention rho^-1 x rho exists to be refuted."""
    m = _matrix(x)
    _check_shape(d, m)
    if convention == "reversed":
        return d.inverse_state @ m @ d.state
    return d.state @ m @ d.inverse_state


def modular_power(d: ModularData, x: Union[Matrix, AlgebraElement], k: int) -> Matrix:
    """E^k(x) = rho^k x rho^-k for any integer k."""
    m = _matrix(x)
    _check_shape(d, m)
    rho = d.state if k >= 0 else d.inverse_state
    rho_inv = d.inverse_state if k >= 0 else d.state
    return rho.power(abs(k)) @ m @ rho_inv.power(abs(k))


def modular_witness(d: ModularData) -> Unit:
    """The unit rho^-1, with sigma_{rho^-1} = E."""
    algebra = d.algebra
    return Unit.from_matrix(algebra, d.inverse_state)


def kms_check(d: ModularData, x: Union[Matrix, AlgebraElement], y: Union[Matrix, AlgebraElement],
              convention: Convention = "standard") -> CheckResult:
    """Tr(rho x E(y)) = Tr(rho y x), with E also checked to be multiplicative and inner."""
    x, y = _matrix(x), _matrix(y)
    _check_shape(d, x, y)
    rho = d.state
    lhs = (rho @ x).trace_of_product(modular_continuation(d, y, convention))
    rhs = (rho @ y).trace_of_product(x)
    details: Dict[str, Any] = {"convention": convention, "lhs": str(lhs), "rhs": str(rhs)}
    if lhs != rhs:
        logger.debug(f"KMS identity fails under the {convention} convention: {lhs} != {rhs}")
        return CheckResult(name="kms", passed=False,
                           counterexample={"x": x.to_json(), "y": y.to_json(), **details})

    Ex, Ey = modular_continuation(d, x, convention), modular_continuation(d, y, convention)
    details["multiplicative"] = Ex @ Ey == modular_continuation(d, x @ y, convention)
    u = modular_witness(d) if convention == "standard" else modular_witness(d).invert()
    algebra = u.parent
    details["inner"] = inner_aut(u, algebra.element(x)).matrix == Ex
    if not (details["multiplicative"] and details["inner"]):
        return CheckResult(name="kms", passed=False, counterexample=details)
    return CheckResult(name="kms", passed=True, witness={"inner_unit": u.to_json()}, details=details)


def modular_group_check(d: ModularData, x: Union[Matrix, AlgebraElement], k: int, l: int) -> CheckResult:
    """E^k o E^l = E^(k+l) on x."""
    lhs = modular_power(d, modular_power(d, x, l), k)
    rhs = modular_power(d, x, k + l)
    if lhs == rhs:
        return CheckResult(name="modular_group", passed=True, witness={"k": k, "l": l})
    return CheckResult(name="modular_group", passed=False,
                       counterexample={"k": k, "l": l, "lhs": lhs.to_json(), "rhs": rhs.to_json()})


def reversed_convention_counterexample() -> CheckResult:
    """rho = diag(1/4, 3/4), x = e12, y = e21: the reversed convention fails KMS."""
    d = ModularData(state=Matrix.diagonal(["1/4", "3/4"], GAUSS))
    x = Matrix.unit(2, 0, 1, GAUSS)
    y = Matrix.unit(2, 1, 0, GAUSS)
    return kms_check(d, x, y, convention="reversed")
