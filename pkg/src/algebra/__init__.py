from .structure import (
    Algebra,
    AlgebraElement,
    FullCoordinates,
    PivotCoordinates,
    Presentation,
    TraceCoordinates,
    center,
    centralizer_in,
    closure,
    full_matrix_algebra,
)
from .homs import (
    AlgHom,
    SigmaTable,
    Unit,
    compose_sigma_check,
    conjugation_hom,
    enumerate_units,
    inner_aut,
    invert_in_algebra,
    random_unit,
    twist,
)

__all__ = [
    'Algebra', 'AlgebraElement', 'FullCoordinates', 'PivotCoordinates', 'Presentation',
    'TraceCoordinates', 'center', 'centralizer_in', 'closure', 'full_matrix_algebra',
    'AlgHom', 'SigmaTable', 'Unit', 'compose_sigma_check', 'conjugation_hom', 'enumerate_units',
    'inner_aut', 'invert_in_algebra', 'random_unit', 'twist',
]
