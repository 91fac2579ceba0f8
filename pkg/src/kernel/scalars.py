"""
Exact scalars over the Gaussian rationals Q(i) and the prime fields F_p.

Two layers live here. ``GaussianRational`` and ``PrimeFieldElement`` are the
user-facing scalars with operator overloading. ``ScalarField`` descriptors do
the arithmetic on *raw* values inside matrices: Gaussian rationals are their
own raw form, prime-field residues are stored as plain ints so that unit-group
enumerations over F_p stay fast.
"""
from __future__ import annotations

import logging
import random
from abc import ABC, abstractmethod
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterator, Sequence, Union

from sympy import isprime

from ..errors import FieldMismatchError, NotAUnitError, VerifierError

logger = logging.getLogger(__name__)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class GaussianRational:
    """re + im*i with both parts exact rationals in lowest terms."""

    __slots__ = ("re", "im")

    def __init__(self, re: Any = 0, im: Any = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(other: Any) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        if isinstance(other, PrimeFieldElement):
            raise FieldMismatchError(
                "cannot mix Gaussian rationals with prime-field elements",
                {"left": "gauss", "right": f"fp:{other.modulus}"},
            )
        return NotImplemented

    def __add__(self, other: Any) -> "GaussianRational":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "GaussianRational":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other: Any) -> "GaussianRational":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "GaussianRational":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        norm = self.re * self.re + self.im * self.im
        if norm == 0:
            raise NotAUnitError("zero has no inverse")
        return GaussianRational(self.re / norm, -self.im / norm)

    def __truediv__(self, other: Any) -> "GaussianRational":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other: Any) -> "GaussianRational":
        return self._coerce(other) * self.inverse()

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __str__(self) -> str:
        if self.im == 0:
            return format_rational(self.re)
        imag = f"{format_rational(abs(self.im))}*i"
        if self.re == 0:
            return imag if self.im > 0 else f"-{imag}"
        sign = "+" if self.im > 0 else "-"
        return f"{format_rational(self.re)}{sign}{imag}"

    def __repr__(self) -> str:
        return f"GaussianRational({self})"


class PrimeFieldElement:
    """A residue ``value mod modulus`` with a prime modulus."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        _require_prime(modulus)
        self.modulus = modulus
        self.value = int(value) % modulus

    def _coerce(self, other: Any) -> "PrimeFieldElement":
        if isinstance(other, PrimeFieldElement):
            if other.modulus != self.modulus:
                raise FieldMismatchError(
                    "prime-field moduli differ",
                    {"left": f"fp:{self.modulus}", "right": f"fp:{other.modulus}"},
                )
            return other
        if isinstance(other, int):
            return PrimeFieldElement(other, self.modulus)
        if isinstance(other, GaussianRational):
            raise FieldMismatchError(
                "cannot mix prime-field elements with Gaussian rationals",
                {"left": f"fp:{self.modulus}", "right": "gauss"},
            )
        return NotImplemented

    def __add__(self, other: Any) -> "PrimeFieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PrimeFieldElement(self.value + other.value, self.modulus)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "PrimeFieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PrimeFieldElement(self.value - other.value, self.modulus)

    def __rsub__(self, other: Any) -> "PrimeFieldElement":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "PrimeFieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PrimeFieldElement(self.value * other.value, self.modulus)

    __rmul__ = __mul__

    def __neg__(self) -> "PrimeFieldElement":
        return PrimeFieldElement(-self.value, self.modulus)

    def inverse(self) -> "PrimeFieldElement":
        if self.value == 0:
            raise NotAUnitError("zero has no inverse", {"modulus": self.modulus})
        return PrimeFieldElement(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other: Any) -> "PrimeFieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, PrimeFieldElement):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.modulus))

    def __str__(self) -> str:
        return f"{self.value} mod {self.modulus}"

    def __repr__(self) -> str:
        return f"PrimeFieldElement({self.value}, {self.modulus})"


Scalar = Union[GaussianRational, PrimeFieldElement]


@lru_cache(maxsize=None)
def _require_prime(modulus: int) -> int:
    if not isinstance(modulus, int) or modulus < 2 or not isprime(modulus):
        raise VerifierError(f"modulus {modulus} is not prime", {"modulus": modulus})
    return modulus


class ScalarField(ABC):
    """Arithmetic on raw entry values of one exact field."""

    descriptor: str

    @property
    @abstractmethod
    def zero(self) -> Any: ...

    @property
    @abstractmethod
    def one(self) -> Any: ...

    @abstractmethod
    def add(self, x: Any, y: Any) -> Any: ...

    @abstractmethod
    def sub(self, x: Any, y: Any) -> Any: ...

    @abstractmethod
    def mul(self, x: Any, y: Any) -> Any: ...

    @abstractmethod
    def neg(self, x: Any) -> Any: ...

    @abstractmethod
    def inv(self, x: Any) -> Any: ...

    @abstractmethod
    def dot(self, xs: Sequence[Any], ys: Sequence[Any]) -> Any: ...

    @abstractmethod
    def coerce(self, value: Any) -> Any:
        """Turn an int, Fraction, string or Scalar of this field into a raw value."""

    @abstractmethod
    def wrap(self, raw: Any) -> Scalar: ...

    @abstractmethod
    def format(self, raw: Any) -> str: ...

    @abstractmethod
    def random(self, rng: random.Random, height: int = 3) -> Any: ...

    def is_zero(self, x: Any) -> bool:
        return not x

    def div(self, x: Any, y: Any) -> Any:
        return self.mul(x, self.inv(y))

    def conjugate(self, x: Any) -> Any:
        return x

    @property
    def is_finite(self) -> bool:
        return False

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, ScalarField) and other.descriptor == self.descriptor

    def __hash__(self) -> int:
        return hash(self.descriptor)

    def __repr__(self) -> str:
        return f"<field {self.descriptor}>"


class GaussianRationalField(ScalarField):
    descriptor = "gauss"

    _ZERO = GaussianRational(0)
    _ONE = GaussianRational(1)

    @property
    def zero(self) -> GaussianRational:
        return self._ZERO

    @property
    def one(self) -> GaussianRational:
        return self._ONE

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def inv(self, x):
        return x.inverse()

    def conjugate(self, x):
        return x.conjugate()

    def dot(self, xs, ys):
        re = Fraction(0)
        im = Fraction(0)
        for x, y in zip(xs, ys):
            if not x or not y:
                continue
            re += x.re * y.re - x.im * y.im
            im += x.re * y.im + x.im * y.re
        return GaussianRational(re, im)

    def coerce(self, value: Any) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(value)
        if isinstance(value, str):
            return parse_gaussian(value)
        if isinstance(value, PrimeFieldElement):
            raise FieldMismatchError("prime-field entry in a Gaussian-rational matrix",
                                     {"entry": str(value)})
        raise VerifierError(f"cannot read {value!r} as a Gaussian rational")

    def wrap(self, raw):
        return raw

    def format(self, raw) -> str:
        return str(raw)

    def random(self, rng: random.Random, height: int = 3) -> GaussianRational:
        re = Fraction(rng.randint(-height, height), rng.randint(1, height))
        im = Fraction(rng.randint(-height, height), rng.randint(1, height))
        return GaussianRational(re, im)


class PrimeField(ScalarField):
    def __init__(self, modulus: int):
        self.modulus = _require_prime(modulus)
        self.descriptor = f"fp:{modulus}"

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def add(self, x, y):
        return (x + y) % self.modulus

    def sub(self, x, y):
        return (x - y) % self.modulus

    def mul(self, x, y):
        return (x * y) % self.modulus

    def neg(self, x):
        return (-x) % self.modulus

    def inv(self, x):
        if x % self.modulus == 0:
            raise NotAUnitError("zero has no inverse", {"modulus": self.modulus})
        return pow(x, -1, self.modulus)

    def dot(self, xs, ys):
        return sum(x * y for x, y in zip(xs, ys)) % self.modulus

    def coerce(self, value: Any) -> int:
        if isinstance(value, bool):
            raise VerifierError(f"cannot read {value!r} as a residue")
        if isinstance(value, int):
            return value % self.modulus
        if isinstance(value, PrimeFieldElement):
            if value.modulus != self.modulus:
                raise FieldMismatchError("prime-field moduli differ",
                                         {"expected": self.descriptor, "entry": str(value)})
            return value.value
        if isinstance(value, Fraction):
            return self.div(value.numerator % self.modulus, value.denominator % self.modulus)
        if isinstance(value, str):
            return parse_residue(value, self.modulus)
        if isinstance(value, GaussianRational):
            raise FieldMismatchError("Gaussian-rational entry in a prime-field matrix",
                                     {"entry": str(value)})
        raise VerifierError(f"cannot read {value!r} as a residue mod {self.modulus}")

    def wrap(self, raw) -> PrimeFieldElement:
        return PrimeFieldElement(raw, self.modulus)

    def format(self, raw) -> str:
        return f"{raw} mod {self.modulus}"

    def random(self, rng: random.Random, height: int = 3) -> int:
        return rng.randrange(self.modulus)

    @property
    def is_finite(self) -> bool:
        return True

    def elements(self) -> Iterator[int]:
        return iter(range(self.modulus))


GAUSS = GaussianRationalField()


@lru_cache(maxsize=None)
def prime_field(modulus: int) -> PrimeField:
    return PrimeField(modulus)


def get_field(descriptor: str) -> ScalarField:
    """Resolve ``gauss`` or ``fp:<p>`` to a field descriptor object."""
    text = descriptor.strip().lower()
    if text in ("gauss", "q(i)", "qi"):
        return GAUSS
    if text.startswith("fp:"):
        try:
            modulus = int(text[3:])
        except ValueError:
            raise VerifierError(f"bad field descriptor {descriptor!r}") from None
        return prime_field(modulus)
    raise VerifierError(f"unknown field {descriptor!r}; expected gauss or fp:<p>")


def field_of(value: Any) -> ScalarField:
    if isinstance(value, PrimeFieldElement):
        return prime_field(value.modulus)
    return GAUSS


def common_field(values: Sequence[Any], default: ScalarField = GAUSS) -> ScalarField:
    """The one field shared by all Scalars in ``values``; ints and Fractions fit any field."""
    found = None
    for value in values:
        if isinstance(value, (GaussianRational, PrimeFieldElement)):
            field = field_of(value)
            if found is not None and field != found:
                raise FieldMismatchError(
                    "scalars from different fields",
                    {"first": found.descriptor, "second": field.descriptor},
                )
            found = field
    return found or default


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise VerifierError(f"not a rational: {text!r}") from None


def parse_gaussian(text: str) -> GaussianRational:
    """Read ``p/q``, ``r/s*i`` or ``p/q+r/s*i`` (``i`` alone means ``1*i``)."""
    s = text.replace(" ", "")
    if not s:
        raise VerifierError("empty scalar")
    if not s.endswith("i"):
        return GaussianRational(parse_rational(s))
    body = s[:-1]
    if body.endswith("*"):
        body = body[:-1]
    split = max(body.rfind("+"), body.rfind("-"))
    if split > 0:
        real_text, imag_text = body[:split], body[split:]
    else:
        real_text, imag_text = "", body
    if imag_text in ("", "+"):
        imag = Fraction(1)
    elif imag_text == "-":
        imag = Fraction(-1)
    else:
        imag = parse_rational(imag_text)
    real = parse_rational(real_text) if real_text else Fraction(0)
    return GaussianRational(real, imag)


def parse_residue(text: str, modulus: int) -> int:
    """Read ``v mod p`` (checking p) or a bare integer."""
    s = text.strip()
    if "mod" in s:
        value_text, modulus_text = s.split("mod", 1)
        if int(modulus_text) != modulus:
            raise FieldMismatchError(
                f"residue {s!r} does not live in fp:{modulus}",
                {"expected": modulus, "found": int(modulus_text)},
            )
        return int(value_text) % modulus
    return parse_rational_residue(s, modulus)


def parse_rational_residue(text: str, modulus: int) -> int:
    q = parse_rational(text)
    if q.denominator % modulus == 0:
        raise NotAUnitError(f"denominator of {text!r} vanishes mod {modulus}")
    return (q.numerator * pow(q.denominator, -1, modulus)) % modulus
