import pytest

from src.algebra import AlgHom, Unit, full_matrix_algebra, random_unit
from src.errors import CertificationError, EndpointMismatchError
from src.groupoid import (
    OutMorphism,
    associativity_check,
    aut_check,
    aut_compose,
    check_two_cell,
    conjugating_unit,
    enumerate_conjugators,
    hcompose,
    identity_cell,
    interchange_probe,
    intertwiner_space,
    invert_cell,
    vcompose,
)
from src.kernel import GAUSS
from src.utils.sampling import (
    diagonal_algebra,
    random_automorphism,
    random_cell,
    random_cell_chain,
    random_pi0_pair,
)


@pytest.fixture
def mat2():
    return full_matrix_algebra(2, GAUSS)


def test_random_cell_is_certified(mat2, rng):
    phi = random_automorphism(mat2, rng)
    f = random_cell(phi, rng)
    assert check_two_cell(f.src, f.dst, f.a, f.b) == f


def test_wrong_pair_is_refuted(mat2, rng):
    phi = random_automorphism(mat2, rng)
    f = random_cell(phi, rng)
    other = random_unit(mat2, rng)
    with pytest.raises(CertificationError) as info:
        check_two_cell(f.src, f.dst, f.a, other)
    assert "counterexample" in info.value.details


def test_vertical_groupoid_laws(mat2, rng):
    phi = random_automorphism(mat2, rng)
    f = random_cell(phi, rng)
    g = random_cell(f.dst, rng)
    gf = vcompose(f, g)
    assert gf.src == f.src and gf.dst == g.dst
    assert vcompose(f, invert_cell(f)).same_pair(identity_cell(f.src))
    assert vcompose(identity_cell(f.src), f).same_pair(f)
    with pytest.raises(EndpointMismatchError):
        vcompose(g, g)


def test_horizontal_composite_certifies(f5, rng):
    for field in (f5, GAUSS):
        algebra = full_matrix_algebra(2, field)
        f, g = random_cell_chain(algebra, 2, rng)
        h = hcompose(f, g)
        assert h.src == g.src.compose(f.src)
        assert h.dst == g.dst.compose(f.dst)
        assert h.a == f.a


def test_horizontal_associativity(mat2, rng):
    for _ in range(5):
        f, g, h = random_cell_chain(mat2, 3, rng)
        assert associativity_check(f, g, h).passed


def test_interchange_holds_up_to_conjugacy(mat2, rng):
    phi = random_automorphism(mat2, rng, name="phi")
    psi = random_automorphism(mat2, rng, name="psi")
    f0 = random_cell(phi, rng)
    f1 = random_cell(f0.dst, rng)
    g0 = random_cell(psi, rng)
    g1 = random_cell(g0.dst, rng)
    result = interchange_probe((f0, f1, g0, g1))
    assert result.details["both_certified"]
    assert result.details["a_equal"]


def test_identity_grid_interchanges_strictly(mat2, rng):
    phi = random_automorphism(mat2, rng)
    f = identity_cell(phi)
    result = interchange_probe((f, f, f, f))
    assert result.passed
    assert result.details["strict_equal"]


def test_pi0_of_idempotent_homs(rng):
    source = diagonal_algebra(GAUSS)
    target = full_matrix_algebra(2, GAUSS)
    for _ in range(10):
        phi0, phi1 = random_pi0_pair(source, target, rng)
        same_rank = phi0.name[1:] == phi1.name[1:]
        found = conjugating_unit(phi0, phi1, rng=rng)
        assert (found is not None) == same_rank
        if found is not None:
            assert found.cell.src == phi0 and found.cell.dst == phi1
            assert intertwiner_space(phi0, phi1)


def test_pi0_search_agrees_with_enumeration(f5, rng):
    source = diagonal_algebra(f5)
    target = full_matrix_algebra(2, f5)
    for _ in range(5):
        phi0, phi1 = random_pi0_pair(source, target, rng)
        found = conjugating_unit(phi0, phi1, rng=rng)
        brute = next(enumerate_conjugators(phi0, phi1), None)
        assert (found is None) == (brute is None)


def test_aut_check_agrees_with_centralizer(mat2, rng):
    phi = random_automorphism(mat2, rng)
    one = Unit.identity(mat2)
    assert aut_check(phi, one, one).passed
    u = random_unit(mat2, rng)
    result = aut_check(phi, u, phi.apply_unit(u))
    assert result.passed
    assert result.details["centralizer_dim"] == 1


def test_aut_cells_close_under_composition(mat2, rng):
    phi = random_automorphism(mat2, rng)
    u, v = random_unit(mat2, rng), random_unit(mat2, rng)
    f = check_two_cell(phi, phi, u, phi.apply_unit(u))
    g = check_two_cell(phi, phi, v, phi.apply_unit(v))
    product, result = aut_compose(f, g)
    assert result.passed
    assert product.src == phi


def test_out_morphisms_identify_inner_twists(mat2, rng):
    phi = random_automorphism(mat2, rng)
    assert OutMorphism(phi) == OutMorphism.identity(mat2)
    assert OutMorphism(phi).compose(OutMorphism(AlgHom.identity(mat2))) == OutMorphism(phi)
