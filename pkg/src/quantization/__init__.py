from .sites import (
    DiscreteCell,
    SiteEmbedding,
    SitePermutation,
    SiteSet,
    all_permutations,
    check_discrete_cell,
    discrete_hcompose,
    discrete_transport,
    discrete_vcompose,
    identity_discrete_cell,
    restrict_cell,
)
from .fermions import (
    CarAlgebra,
    CliffordPresentation,
    induced_hom,
    majorana_generators,
    quantize,
    quantize_sites,
)
from .witnesses import (
    InnerWitness,
    antihom_check,
    bogoliubov,
    defect_table,
    inner_witness,
    permutation_witness,
    witness_sample,
)
from .two_functor import quantize_cell, two_functor_check
from .modular import (
    ModularData,
    kms_check,
    modular_continuation,
    modular_group_check,
    modular_power,
    modular_witness,
    reversed_convention_counterexample,
)

__all__ = [
    'DiscreteCell', 'SiteEmbedding', 'SitePermutation', 'SiteSet', 'all_permutations',
    'check_discrete_cell', 'discrete_hcompose', 'discrete_transport', 'discrete_vcompose',
    'identity_discrete_cell', 'restrict_cell', 'CarAlgebra', 'CliffordPresentation', 'induced_hom',
    'majorana_generators', 'quantize', 'quantize_sites', 'InnerWitness', 'antihom_check', 'bogoliubov',
    'defect_table', 'inner_witness', 'permutation_witness', 'witness_sample', 'quantize_cell',
    'two_functor_check', 'ModularData', 'kms_check', 'modular_continuation', 'modular_group_check',
    'modular_power', 'modular_witness', 'reversed_convention_counterexample',
]
