from fractions import Fraction

import pytest
import sympy

from src.errors import DimensionMismatchError, FieldMismatchError, NotAUnitError, VerifierError
from src.kernel import (
    GAUSS,
    GaussianRational,
    Matrix,
    determinant,
    get_field,
    intertwiner_kernel,
    invert,
    is_invertible,
    minimal_polynomial,
    polynomial_inverse,
    prime_field,
    rank,
)
from src.kernel.linalg import evaluate_polynomial


def test_gaussian_arithmetic_is_exact():
    z = GaussianRational(Fraction(1, 2), 3)
    w = GaussianRational(-1, Fraction(1, 3))
    assert z * w == GaussianRational(Fraction(-1, 2) - 1, Fraction(1, 6) - 3)
    assert z * z.inverse() == GaussianRational(1)
    assert (z + w) - w == z
    assert z.conjugate() == GaussianRational(Fraction(1, 2), -3)


@pytest.mark.parametrize("text, re, im", [
    ("1/2", Fraction(1, 2), 0),
    ("i", 0, 1),
    ("-i", 0, -1),
    ("3/4*i", 0, Fraction(3, 4)),
    ("1/2-3*i", Fraction(1, 2), -3),
    ("-2+i", -2, 1),
])
def test_gauss_parses_scalar_strings(text, re, im):
    assert GAUSS.coerce(text) == GaussianRational(re, im)


def test_prime_field_parses_residues(f5):
    assert f5.coerce("3 mod 5") == 3
    assert f5.coerce("1/2") == 3
    assert f5.coerce(-1) == 4
    with pytest.raises(FieldMismatchError):
        f5.coerce("3 mod 7")
    with pytest.raises(NotAUnitError):
        f5.coerce("1/5")


def test_get_field_descriptors():
    assert get_field("gauss") is GAUSS
    assert get_field("fp:7") == prime_field(7)
    assert get_field("fp:7").is_finite
    with pytest.raises(VerifierError):
        get_field("fp:6")
    with pytest.raises(VerifierError):
        get_field("reals")


def test_fields_do_not_mix(f5):
    with pytest.raises(FieldMismatchError):
        GaussianRational(1) + f5.wrap(2)
    a = Matrix.identity(2, GAUSS)
    b = Matrix.identity(2, f5)
    with pytest.raises(FieldMismatchError):
        a @ b


def test_shape_errors():
    with pytest.raises(DimensionMismatchError):
        Matrix.identity(2) @ Matrix.identity(3)
    with pytest.raises(DimensionMismatchError):
        Matrix.from_rows([[1, 2], [3]], GAUSS)


def test_inverse_matches_sympy(rng):
    for _ in range(20):
        m = Matrix.random(3, GAUSS, rng, height=3)
        oracle = sympy.Matrix([[sympy.Rational(x.re.numerator, x.re.denominator)
                                + sympy.I * sympy.Rational(x.im.numerator, x.im.denominator)
                                for x in m.row(i)] for i in range(3)])
        assert rank(m) == oracle.rank()
        if oracle.det() == 0:
            assert not is_invertible(m)
            with pytest.raises(NotAUnitError):
                invert(m)
            continue
        inverse = invert(m)
        assert m @ inverse == Matrix.identity(3, GAUSS)
        expected = oracle.inv()
        for i in range(3):
            for j in range(3):
                entry = inverse.raw(i, j)
                got = sympy.Rational(entry.re.numerator, entry.re.denominator) \
                    + sympy.I * sympy.Rational(entry.im.numerator, entry.im.denominator)
                assert sympy.simplify(got - expected[i, j]) == 0


def test_determinant_over_f5(f5):
    m = Matrix.from_rows([[1, 2], [3, 4]], f5)
    assert determinant(m) == f5.wrap(4 - 6)
    assert is_invertible(m)
    assert m @ invert(m) == Matrix.identity(2, f5)
    singular = Matrix.from_rows([[1, 2], [2, 4]], f5)
    assert rank(singular) == 1


def test_intertwiner_kernel_of_identity_is_everything():
    gens = [Matrix.identity(2, GAUSS)]
    solutions = intertwiner_kernel(gens, gens)
    assert len(solutions) == 4


def test_kron_and_trace():
    a = Matrix.diagonal([1, 2], GAUSS)
    b = Matrix.diagonal([3, 5], GAUSS)
    k = a.kron(b)
    assert k.shape == (4, 4)
    assert k.trace_raw() == GaussianRational(3 + 5 + 6 + 10)
    assert (a @ b).trace_raw() == a.trace_of_product(b)


def test_json_round_trip_keeps_exact_strings(f5):
    m = Matrix.from_rows([["1/2", "i"], [0, "-3/4+2*i"]], GAUSS)
    assert m.to_json() == [["1/2", "1*i"], ["0", "-3/4+2*i"]]
    assert Matrix.from_json(m.to_json(), GAUSS) == m
    p = Matrix.from_rows([[1, 2], [3, 4]], f5)
    assert p.to_json()[0] == ["1 mod 5", "2 mod 5"]
    assert Matrix.from_json(p.to_json(), f5) == p


@pytest.mark.parametrize("rows, expected", [
    ([[1, 0], [0, 2]], [2, -3, 1]),
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [-1, 1]),
    ([[0, 1], [0, 0]], [0, 0, 1]),
    ([[0, -1], [1, 0]], [1, 0, 1]),
])
def test_minimal_polynomial_is_monic_in_ascending_degree(gauss, rows, expected):
    m = Matrix.from_json(rows, gauss)
    coefficients = minimal_polynomial(m)
    assert coefficients == expected
    assert evaluate_polynomial(coefficients, m) == Matrix.zeros(m.rows, m.cols, gauss)


def test_polynomial_inverse_agrees_with_gauss_jordan(f5):
    m = Matrix.from_json([[1, 2, 0], [0, 1, 3], [1, 0, 1]], f5)
    assert polynomial_inverse(m) == invert(m)
    with pytest.raises(NotAUnitError):
        polynomial_inverse(Matrix.from_json([[1, 2], [2, 4]], f5))
