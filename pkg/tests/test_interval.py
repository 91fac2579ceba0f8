from fractions import Fraction

import pytest
import sympy

from src.errors import CertificationError, CollarError, PLMapError
from src.interval import (
    InteriorDiffeo,
    Interval,
    PLMap,
    boundary_multiplier,
    check_interval_two_cell,
    class_compose,
    class_equal,
    fixed_collars,
    identity_interval_cell,
    in_identity_component,
    interval_associativity_check,
    interval_hcompose,
    interval_vcompose,
    lorentz,
    lorentz_flow_check,
    mapping_class,
    pi0_emb,
    pl_compose,
    pl_invert,
    transport,
    transport_square,
)
from src.utils.sampling import (
    interval_chain,
    random_diffeo,
    random_embedding,
    random_interval_cell,
    random_lorentz_parameter,
    random_self_map,
)

UNIT = Interval(left=0, right=1, label="I")
WIDE = Interval(left=0, right=2, label="J")


def test_interval_rejects_degenerate_endpoints():
    with pytest.raises(PLMapError):
        Interval(left=1, right=1)


def test_pl_map_must_increase():
    with pytest.raises(PLMapError):
        PLMap.from_points(UNIT, UNIT, [(0, 0), ("1/2", "1/2"), (1, "1/4")])
    with pytest.raises(PLMapError):
        PLMap.from_points(UNIT, UNIT, [(0, 0), (1, 2)])


def test_collinear_breakpoints_are_merged():
    f = PLMap.from_points(UNIT, UNIT, [(0, 0), ("1/2", "1/2"), (1, 1)])
    assert f.is_identity()
    assert f.breakpoints == (Fraction(0), Fraction(1))


def test_composition_and_inverse(rng):
    for _ in range(20):
        c = random_diffeo(UNIT, rng)
        d = random_diffeo(UNIT, rng)
        cd = pl_compose(c.pl, d.pl)
        for x in (Fraction(1, 3), Fraction(5, 7)):
            assert cd(x) == c(d(x))
        assert pl_compose(c.pl, pl_invert(c.pl)).is_identity()


def test_composition_needs_nested_image():
    f = PLMap.affine(UNIT, WIDE, 2, 0)
    with pytest.raises(PLMapError):
        pl_compose(f, f)


def test_interior_diffeo_collar_is_checked():
    f = PLMap.from_points(UNIT, UNIT, [(0, 0), ("1/4", "1/4"), ("1/2", "1/3"), ("3/4", "3/4"), (1, 1)])
    d = InteriorDiffeo(pl=f, collar="1/4")
    assert d.collar == Fraction(1, 4)
    assert fixed_collars(f) == (Fraction(1, 4), Fraction(1, 4))
    with pytest.raises(CollarError):
        InteriorDiffeo(pl=f, collar="1/3")
    moving = PLMap.from_points(UNIT, UNIT, [(0, 0), ("1/2", "1/4"), (1, 1)])
    with pytest.raises(CollarError):
        InteriorDiffeo.from_map(moving)


def test_transport_square_commutes(rng):
    for _ in range(30):
        c = random_diffeo(UNIT, rng)
        eps = random_embedding(UNIT, WIDE, rng)
        pushed, point = transport_square(c, eps)
        assert point is None
        assert pushed.interval.same_as(WIDE)
        support = pushed.support()
        if support is not None:
            assert eps.image.contains_interval(support)


def test_transport_is_functorial(rng):
    I, J, K = interval_chain(rng, 3)
    eps = random_embedding(I, J, rng)
    delta = random_embedding(J, K, rng)
    c, d = random_diffeo(I, rng), random_diffeo(I, rng)
    assert transport(c.compose(d), eps).same_map(transport(c, eps).compose(transport(d, eps)))
    assert transport(c, pl_compose(delta, eps)).same_map(transport(transport(c, eps), delta))


def test_interval_cell_rejects_a_bad_square():
    eps = PLMap.affine(UNIT, WIDE, 1, 0)
    b = InteriorDiffeo.from_map(PLMap.from_points(WIDE, WIDE, [(0, 0), ("1/2", "1/2"), (1, "5/4"), ("3/2", "3/2"), (2, 2)]))
    with pytest.raises(CertificationError):
        check_interval_two_cell(eps, eps, InteriorDiffeo.identity(UNIT), b)


def test_interval_cells_compose(rng):
    for _ in range(10):
        I, J, K, L = interval_chain(rng, 4)
        f = random_interval_cell(I, J, rng)
        g = random_interval_cell(J, K, rng)
        h = random_interval_cell(K, L, rng)
        gf = interval_hcompose(f, g)
        assert gf.src.same_map(pl_compose(g.src, f.src))
        assert interval_associativity_check(f, g, h).passed
        assert interval_vcompose(identity_interval_cell(f.src), f).same_cell(f)


def test_pi0_of_embeddings_tracks_endpoint_germs():
    touching = PLMap.affine(UNIT, WIDE, 1, 0)
    steeper = PLMap.from_points(UNIT, WIDE, [(0, 0), ("1/2", 1), (1, "3/2")])
    floating = PLMap.affine(UNIT, WIDE, 1, "1/2")
    assert not pi0_emb(touching, steeper).equivalent
    assert not pi0_emb(touching, floating).equivalent
    same_germ = PLMap.from_points(UNIT, WIDE, [(0, 0), ("1/2", "1/2"), (1, "3/2")])
    comparison = pi0_emb(touching, same_germ)
    assert comparison.equivalent
    assert comparison.cell.src.same_map(touching)


def test_mapping_class_is_a_homomorphism(rng):
    I = Interval(left=-1, right=2, label="I")
    for _ in range(30):
        f, g = random_self_map(I, rng), random_self_map(I, rng)
        composite = mapping_class(pl_compose(f, g))
        assert class_equal(composite, class_compose(mapping_class(f), mapping_class(g)))
        left, right = fixed_collars(f)
        assert in_identity_component(f) == (left > 0 and right > 0)


def test_lorentz_flow_group_law(rng):
    assert lorentz(0).is_identity()
    assert mapping_class(lorentz(0)).is_identity()
    for _ in range(20):
        u1, u2 = random_lorentz_parameter(rng), random_lorentz_parameter(rng)
        assert lorentz_flow_check(u1, u2).passed
        assert not mapping_class(lorentz(u1)).is_identity()


@pytest.mark.parametrize("u", ["1/2", "-1/3", "2/7"])
def test_lorentz_derivative_matches_sympy(u):
    g = lorentz(u)
    x = sympy.Symbol("x")
    c, s = sympy.Rational(g.c.numerator, g.c.denominator), sympy.Rational(g.s.numerator, g.s.denominator)
    derivative = sympy.diff((c * x + s) / (s * x + c), x).subs(x, 1)
    expected = Fraction(int(sympy.numer(derivative)), int(sympy.denom(derivative)))
    assert g.derivative(1) == expected
    assert expected == boundary_multiplier(u) ** 2


def test_lorentz_parameter_range():
    with pytest.raises(PLMapError):
        lorentz(1)


def test_one_sided_slopes_at_a_breakpoint():
    f = PLMap.from_points(UNIT, UNIT, [(0, 0), ("1/2", "1/4"), (1, 1)])
    assert f.slope_at("1/2", side="left") == Fraction(1, 2)
    assert f.slope_at("1/2") == Fraction(3, 2)
    assert f.slope_at(0) == Fraction(1, 2)
    with pytest.raises(PLMapError):
        f.slope_at(1)
    with pytest.raises(PLMapError):
        f.slope_at(2, side="left")
