from .pl import (
    InteriorDiffeo,
    Interval,
    PLMap,
    as_fraction,
    fixed_collars,
    pl_compose,
    pl_invert,
    transport,
)
from .mobius import MobiusMap, boundary_multiplier, chart_product, lorentz, lorentz_flow_check
from .germs import (
    BoundaryGerm,
    Endpoint,
    MappingClass,
    class_compose,
    class_equal,
    in_identity_component,
    mapping_class,
)
from .cells import (
    EmbeddingComparison,
    IntervalTwoCell,
    check_interval_two_cell,
    endpoint_pattern,
    identity_interval_cell,
    interval_associativity_check,
    interval_hcompose,
    interval_vcompose,
    pi0_emb,
    transport_square,
)

__all__ = [
    'InteriorDiffeo', 'Interval', 'PLMap', 'as_fraction', 'fixed_collars', 'pl_compose', 'pl_invert',
    'transport', 'MobiusMap', 'boundary_multiplier', 'chart_product', 'lorentz', 'lorentz_flow_check',
    'BoundaryGerm', 'Endpoint', 'MappingClass', 'class_compose', 'class_equal', 'in_identity_component',
    'mapping_class', 'EmbeddingComparison', 'IntervalTwoCell', 'check_interval_two_cell',
    'endpoint_pattern', 'identity_interval_cell', 'interval_associativity_check', 'interval_hcompose',
    'interval_vcompose', 'pi0_emb', 'transport_square',
]
