from .scalars import (
    GAUSS,
    GaussianRational,
    GaussianRationalField,
    PrimeField,
    PrimeFieldElement,
    Scalar,
    ScalarField,
    field_of,
    get_field,
    prime_field,
)
from .matrix import Matrix
from .linalg import (
    IncrementalEchelon,
    determinant,
    intertwiner_kernel,
    invert,
    is_invertible,
    minimal_polynomial,
    nullspace_raw,
    polynomial_inverse,
    rank,
    solve_linear,
)

__all__ = [
    'GAUSS', 'GaussianRational', 'GaussianRationalField', 'PrimeField', 'PrimeFieldElement',
    'Scalar', 'ScalarField', 'field_of', 'get_field', 'prime_field', 'Matrix',
    'IncrementalEchelon', 'determinant', 'intertwiner_kernel', 'invert', 'is_invertible', 'minimal_polynomial',
    'nullspace_raw', 'polynomial_inverse', 'rank', 'solve_linear',
]
