from fractions import Fraction

import pytest

from src.errors import CertificationError, SiteCapError, SiteIncompatibleError, StateError
from src.interval import InteriorDiffeo, Interval, PLMap, interval_hcompose
from src.kernel import GAUSS, Matrix
from src.quantization import (
    ModularData,
    SiteEmbedding,
    SitePermutation,
    SiteSet,
    all_permutations,
    antihom_check,
    bogoliubov,
    check_discrete_cell,
    defect_table,
    discrete_hcompose,
    induced_hom,
    inner_witness,
    kms_check,
    modular_group_check,
    modular_power,
    permutation_witness,
    quantize,
    quantize_cell,
    restrict_cell,
    reversed_convention_counterexample,
    two_functor_check,
    witness_sample,
)
from src.quantization.fermions import CAR_CACHE_SIZE, car_algebra_of
from src.quantization.witnesses import WITNESS_CACHE_SIZE
from src.utils.sampling import (
    random_density,
    random_discrete_cell,
    random_gauss_matrix,
    random_site_compatible_cell,
)

UNIT = Interval(left=0, right=1, label="I")


def sites(resolution: int, right=1, label="I") -> SiteSet:
    return SiteSet(interval=Interval(left=0, right=right, label=label), resolution=resolution)


def test_site_set_counts_interior_points():
    s = sites(4)
    assert s.count == 3
    assert s.sites == (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
    assert s.index_of(Fraction(1, 2)) == 1
    assert s.index_of(Fraction(1, 3)) is None
    with pytest.raises(SiteIncompatibleError):
        sites(1)


@pytest.mark.parametrize("resolution", [2, 3, 4])
def test_car_algebra_is_full(resolution):
    car = quantize(UNIT, resolution)
    assert car.algebra.dim == 4 ** (resolution - 1)
    assert car.ambient_dim == 2 ** (resolution - 1)


def test_site_cap_is_enforced():
    with pytest.raises(SiteCapError):
        quantize(UNIT, 5, site_cap=3)


def test_cached_algebras_still_respect_the_site_cap():
    car = quantize(UNIT, 4)
    assert quantize(UNIT, 4) is car
    with pytest.raises(SiteCapError):
        quantize(UNIT, 4, site_cap=2)
    assert car_algebra_of.cache_info().maxsize == CAR_CACHE_SIZE


def test_witness_cache_is_bounded():
    a = SitePermutation.transposition(sites(3), 0, 1)
    assert permutation_witness(a) is permutation_witness(a)
    assert permutation_witness.cache_info().maxsize == WITNESS_CACHE_SIZE


def test_induced_hom_from_a_site_compatible_embedding():
    J = Interval(left=0, right=Fraction(3, 2), label="J")
    eps = PLMap.affine(UNIT, J, 1, Fraction(1, 4))
    hom = induced_hom(eps, resolution=4)
    assert hom.source.dim == 4 ** 3
    assert hom.target.dim == 4 ** 5
    off_lattice = PLMap.affine(UNIT, J, 1, Fraction(1, 8))
    with pytest.raises(SiteIncompatibleError):
        induced_hom(off_lattice, resolution=4)


@pytest.mark.parametrize("resolution", [2, 3, 4])
def test_every_permutation_has_a_unique_witness(resolution, rng):
    s = sites(resolution)
    for a in all_permutations(s):
        witness = permutation_witness(a)
        assert witness.solution_dim == 1
        assert witness_sample(witness, rng, samples=5, height=1).passed


def test_diffeo_witness_agrees_with_its_site_permutation():
    s = sites(4)
    fixing = InteriorDiffeo.from_map(PLMap.from_points(
        UNIT, UNIT, [(0, 0), ("1/4", "1/4"), ("3/8", "5/16"), ("1/2", "1/2"), (1, 1)]))
    alpha = bogoliubov(fixing, resolution=4)
    assert alpha.is_identity()
    assert inner_witness(alpha).unit.matrix.scalar_value() is not None
    assert SitePermutation.from_diffeo(fixing, s).is_identity()


def test_witness_map_is_an_antihomomorphism_up_to_scalar():
    s = sites(4)
    a0 = SitePermutation.transposition(s, 0, 1)
    a1 = SitePermutation.transposition(s, 1, 2)
    result = antihom_check(a0, a1)
    assert result.passed
    assert not result.details["permutations_commute"]
    assert result.details["same_order"]["scalar"] is None


def test_defect_tables():
    small = defect_table(list(all_permutations(sites(3))))
    assert small.passed
    assert len(small.details["table"]) == 4
    s = sites(4)
    generators = [SitePermutation.transposition(s, i, i + 1) for i in range(s.count - 1)]
    result = defect_table(generators)
    assert result.passed
    assert len(result.details["table"]) == 4


def test_discrete_cells(rng):
    I, J, K = sites(2), sites(3, right=Fraction(3, 2), label="J"), sites(4, right=2, label="K")
    f = random_discrete_cell(I, J, rng)
    g = random_discrete_cell(J, K, rng)
    h = discrete_hcompose(f, g)
    assert h.src.same_map(g.src.compose(f.src))
    eps = SiteEmbedding.identity(J)
    with pytest.raises(CertificationError):
        check_discrete_cell(eps, eps, SitePermutation.identity(J), SitePermutation.transposition(J, 0, 1))


def test_quantized_cells_certify(rng):
    for _ in range(3):
        cell = random_site_compatible_cell(3, 1, rng)
        discrete = restrict_cell(cell, 3)
        image = quantize_cell(discrete)
        assert image.src.source == quantize(UNIT, 3).algebra


def test_two_functor_on_discrete_cells(rng):
    I, J, K = sites(2), sites(3, right=Fraction(3, 2), label="J"), sites(3, right=Fraction(3, 2), label="K")
    for _ in range(3):
        f = random_discrete_cell(I, J, rng)
        g = random_discrete_cell(J, K, rng)
        result = two_functor_check(f, g)
        assert result.passed, result.counterexample
        assert result.details["forms"]["conclusion"]["up_to_scalar"]


def test_two_functor_on_an_interval_cell_then_a_discrete_cell(rng):
    f = random_site_compatible_cell(2, 1, rng)
    J = f.src.codomain
    g_source = SiteSet(interval=J, resolution=3)
    K = sites(3, right=Fraction(3, 2), label="K")
    g = random_discrete_cell(g_source, K, rng)
    assert two_functor_check(f, g, resolution=2).passed


def test_two_functor_quantizes_the_interval_composite(rng):
    for _ in range(5):
        f = random_site_compatible_cell(2, 1, rng)
        g = random_site_compatible_cell(2, 1, rng, start=1, labels=("J", "K"))
        assert g.src.domain.same_as(f.src.codomain)
        assert g.src.codomain.same_as(Interval(left=0, right=2))

        restricted = restrict_cell(interval_hcompose(f, g), 2)
        assert restricted.same_cell(discrete_hcompose(restrict_cell(f, 2), restrict_cell(g, 3)))

        result = two_functor_check(f, g, resolution=2)
        assert result.passed, result.counterexample
        composite = result.details["interval_hcompose"]
        assert composite["agrees"] and composite["matches_discrete"]
        assert composite["same_homs"] and composite["a_equal"]


def test_discrete_inputs_skip_the_interval_composite(rng):
    I, J, K = sites(2), sites(3, right=Fraction(3, 2), label="J"), sites(4, right=2, label="K")
    result = two_functor_check(random_discrete_cell(I, J, rng), random_discrete_cell(J, K, rng))
    assert "interval_hcompose" not in result.details


def test_states_must_be_faithful():
    with pytest.raises(StateError):
        ModularData(state=Matrix.diagonal(["1/2", "1/4"], GAUSS))
    with pytest.raises(StateError):
        ModularData(state=Matrix.diagonal(["3/2", "-1/2"], GAUSS))


def test_kms_holds_for_the_standard_convention(rng):
    for n in (2, 3):
        d = ModularData(state=random_density(n, rng))
        for _ in range(5):
            x, y = random_gauss_matrix(n, rng), random_gauss_matrix(n, rng)
            result = kms_check(d, x, y)
            assert result.passed
            assert result.details["multiplicative"] and result.details["inner"]
        assert modular_group_check(d, x, 2, -3).passed
        assert modular_power(d, x, 0) == x


def test_reversed_convention_is_refuted():
    result = reversed_convention_counterexample()
    assert not result.passed
    assert result.counterexample["convention"] == "reversed"
