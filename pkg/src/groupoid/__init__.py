from .two_cells import (
    TwoCell,
    associativity_check,
    check_two_cell,
    hcompose,
    identity_cell,
    interchange_probe,
    invert_cell,
    vcompose,
)
from .out import (
    Conjugator,
    OutMorphism,
    aut_check,
    aut_compose,
    conjugating_unit,
    enumerate_conjugators,
    intertwiner_space,
    pi0_equal,
)

__all__ = [
    'TwoCell', 'associativity_check', 'check_two_cell', 'hcompose', 'identity_cell',
    'interchange_probe', 'invert_cell', 'vcompose', 'Conjugator', 'OutMorphism', 'aut_check',
    'aut_compose', 'conjugating_unit', 'enumerate_conjugators', 'intertwiner_space', 'pi0_equal',
]
