import pytest

from src.algebra import (
    Algebra,
    AlgHom,
    SigmaTable,
    Unit,
    center,
    closure,
    compose_sigma_check,
    conjugation_hom,
    enumerate_units,
    full_matrix_algebra,
    inner_aut,
    invert_in_algebra,
    random_unit,
    twist,
)
from src.errors import ClosureOverflowError, FieldMismatchError, HomomorphismError, NotInAlgebraError
from src.kernel import GAUSS, Matrix
from src.utils.sampling import diagonal_algebra


def test_full_matrix_algebra_basis(f5):
    mat2 = full_matrix_algebra(2, f5)
    assert mat2.dim == 4
    assert mat2.one().matrix == Matrix.identity(2, f5)
    x = mat2.element(Matrix.from_rows([[1, 2], [3, 4]], f5))
    assert x.coords == (1, 2, 3, 4)


def test_closure_of_a_nilpotent_generator():
    n = Matrix.unit(2, 0, 1, GAUSS)
    algebra = closure([n], 2, name="N")
    assert algebra.dim == 2
    assert algebra.words == ((), (0,))
    assert Matrix.unit(2, 1, 0, GAUSS) not in algebra


def test_closure_of_two_generators_is_full():
    gens = [Matrix.unit(2, 0, 1, GAUSS), Matrix.unit(2, 1, 0, GAUSS)]
    assert closure(gens, 2).dim == 4


def test_closure_cap_is_enforced():
    gens = [Matrix.unit(3, 0, 1, GAUSS), Matrix.unit(3, 1, 2, GAUSS), Matrix.unit(3, 2, 0, GAUSS)]
    with pytest.raises(ClosureOverflowError):
        closure(gens, 3, cap=4)


def test_basis_without_identity_is_rejected():
    with pytest.raises(NotInAlgebraError):
        Algebra([Matrix.unit(2, 0, 0, GAUSS)], name="bad")


def test_inverse_stays_in_the_algebra(rng):
    algebra = closure([Matrix.from_rows([[1, 1], [0, 1]], GAUSS)], 2)
    u = random_unit(algebra, rng)
    assert (u.element * u.inverse) == algebra.one()
    x = algebra.element(Matrix.from_rows([[2, 3], [0, 2]], GAUSS))
    v = invert_in_algebra(x)
    assert v.inverse.parent == algebra


def test_center_of_full_matrix_algebra_is_scalars():
    assert len(center(full_matrix_algebra(2, GAUSS))) == 1
    assert len(center(diagonal_algebra(GAUSS))) == 2


def test_sigma_is_right_action(rng):
    mat2 = full_matrix_algebra(2, GAUSS)
    a, b = random_unit(mat2, rng), random_unit(mat2, rng)
    assert compose_sigma_check(a, b).passed
    x = mat2.random_element(rng)
    assert inner_aut(a * b, x) == inner_aut(b, inner_aut(a, x))


def test_units_of_gl2_f5(f5):
    units = list(enumerate_units(full_matrix_algebra(2, f5)))
    assert len(units) == 480


def test_enumeration_refuses_infinite_fields():
    with pytest.raises(FieldMismatchError):
        next(enumerate_units(full_matrix_algebra(2, GAUSS)))


@pytest.mark.slow
def test_sigma_order_law_over_gl2_f5(f5):
    mat2 = full_matrix_algebra(2, f5)
    result = SigmaTable(mat2, list(enumerate_units(mat2))).order_law_sweep()
    assert result.passed
    assert result.details["pairs"] == 480 ** 2


def test_sigma_table_on_a_subgroup(f5):
    mat2 = full_matrix_algebra(2, f5)
    diagonal_units = [u for u in enumerate_units(mat2) if u.matrix.raw(0, 1) == 0 and u.matrix.raw(1, 0) == 0]
    result = SigmaTable(mat2, diagonal_units).order_law_sweep()
    assert result.passed
    assert result.details["pairs"] == 16 ** 2


def test_homomorphism_certification_rejects_non_multiplicative_maps():
    d2 = diagonal_algebra(GAUSS)
    mat2 = full_matrix_algebra(2, GAUSS)
    with pytest.raises(HomomorphismError):
        AlgHom(d2, mat2, [Matrix.unit(2, 0, 1, GAUSS), Matrix.identity(2, GAUSS) - Matrix.unit(2, 0, 1, GAUSS)])


def test_conjugation_hom_and_twist(rng):
    mat2 = full_matrix_algebra(2, GAUSS)
    u = random_unit(mat2, rng)
    sigma = conjugation_hom(mat2, u)
    x = mat2.random_element(rng)
    assert sigma(x) == inner_aut(u, x)
    identity = AlgHom.identity(mat2)
    assert twist(identity, u) == sigma
    assert conjugation_hom(mat2, Unit.identity(mat2)).is_identity()


def test_generator_images_extend_along_words():
    gens = [Matrix.unit(2, 0, 1, GAUSS), Matrix.unit(2, 1, 0, GAUSS)]
    algebra = closure(gens, 2, name="M")
    swapped = AlgHom.from_generator_images(algebra, algebra, [gens[1], gens[0]], name="swap")
    assert swapped(algebra.element(gens[0])).matrix == gens[1]
