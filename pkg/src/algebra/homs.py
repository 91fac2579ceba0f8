"""
Units, inner automorphisms and unital algebra homomorphisms.
"""
from __future__ import annotations

import itertools
import logging
import random
from typing import Any, Dict, Iterator, List, Optional, Sequence, Union

from ..errors import (
    ClosureOverflowError,
    DimensionMismatchError,
    EndpointMismatchError,
    FieldMismatchError,
    HomomorphismError,
    NotAUnitError,
    NotInAlgebraError,
    ParentMismatchError,
)
from ..kernel import Matrix
from ..kernel.linalg import invert, is_invertible, polynomial_inverse
from ..models.verdict import CheckResult
from .structure import Algebra, AlgebraElement, Coords

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_LIMIT = 4096


class Unit:
    """An invertible element stored together with its inverse."""

    __slots__ = ("element", "inverse")

    def __init__(self, element: AlgebraElement, inverse: AlgebraElement, check: bool = True):
        if element.parent != inverse.parent:
            raise ParentMismatchError("a unit and its inverse must live in the same algebra")
        if check:
            one = element.parent.one()
            if element * inverse != one or inverse * element != one:
                raise NotAUnitError(
                    f"claimed inverse does not invert in {element.parent.name}",
                    {"element": element.to_json(), "inverse": inverse.to_json()},
                )
        self.element = element
        self.inverse = inverse

    @classmethod
    def identity(cls, algebra: Algebra) -> "Unit":
        one = algebra.one()
        return cls(one, one, check=False)

    @classmethod
    def from_matrix(cls, algebra: Algebra, m: Matrix) -> "Unit":
        element = algebra.element(m)
        return cls(element, algebra.element(invert(m)), check=False)

    @property
    def parent(self) -> Algebra:
        return self.element.parent

    @property
    def matrix(self) -> Matrix:
        return self.element.matrix

    @property
    def inverse_matrix(self) -> Matrix:
        return self.inverse.matrix

    def __mul__(self, other: "Unit") -> "Unit":
        if not isinstance(other, Unit):
            return NotImplemented
        return Unit(self.element * other.element, other.inverse * self.inverse, check=False)

    def invert(self) -> "Unit":
        return Unit(self.inverse, self.element, check=False)

    def is_identity(self) -> bool:
        return self.element == self.parent.one()

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Unit):
            return NotImplemented
        return self.element == other.element

    def __hash__(self) -> int:
        return hash(self.element)

    def to_json(self) -> List[List[str]]:
        return self.element.to_json()

    def __repr__(self) -> str:
        return f"Unit({self.matrix!r})"


def invert_in_algebra(x: AlgebraElement) -> Unit:
    """The inverse of x as a polynomial in x, hence inside x's algebra."""
    inverse = polynomial_inverse(x.matrix)
    coords = x.parent.coordinates(inverse)
    if coords is None:
        raise NotInAlgebraError(
            f"inverse escaped {x.parent.name}; the basis is not closed",
            {"element": x.to_json()},
        )
    return Unit(x, AlgebraElement(x.parent, coords, inverse))


def random_unit(algebra: Algebra, rng: random.Random, height: int = 3, attempts: int = 64) -> Unit:
    for _ in range(attempts):
        x = algebra.random_element(rng, height)
        if is_invertible(x.matrix):
            return invert_in_algebra(x)
    raise NotAUnitError(f"no unit found in {attempts} random draws from {algebra.name}")


def inner_aut(u: Unit, x: AlgebraElement) -> AlgebraElement:
    """sigma_u(x) = u^-1 x u."""
    if x.parent != u.parent:
        raise ParentMismatchError(f"unit of {u.parent.name} cannot conjugate an element of {x.parent.name}")
    return u.parent.element(u.inverse_matrix @ x.matrix @ u.matrix)


def compose_sigma_check(a: Unit, b: Unit) -> CheckResult:
    """sigma_{ab} = sigma_b o sigma_a on every basis element."""
    if a.parent != b.parent:
        raise ParentMismatchError("sigma order law needs units of one algebra")
    ab = a * b
    for k, x in enumerate(a.parent.basis_elements()):
        lhs = inner_aut(ab, x)
        rhs = inner_aut(b, inner_aut(a, x))
        if lhs != rhs:
            return CheckResult(
                name="sigma_order",
                passed=False,
                counterexample={"basis_index": k, "sigma_ab": lhs.to_json(), "sigma_b_sigma_a": rhs.to_json()},
            )
    return CheckResult(name="sigma_order", passed=True, details={"basis_checked": a.parent.dim})


def enumerate_units(algebra: Algebra, limit: int = DEFAULT_ENUMERATION_LIMIT) -> Iterator[Unit]:
    """Every unit of an algebra over a prime field, in lexicographic coordinate order."""
    field = algebra.field
    if not field.is_finite:
        raise FieldMismatchError(f"units of {algebra.name} over {field.descriptor} cannot be enumerated")
    space = field.modulus ** algebra.dim
    if space > limit:
        raise ClosureOverflowError(
            f"enumerating {space} coordinate vectors of {algebra.name} exceeds the limit of {limit}",
            {"limit": limit, "space": space},
        )
    for coords in itertools.product(range(field.modulus), repeat=algebra.dim):
        m = algebra.matrix_of(coords)
        if not is_invertible(m):
            continue
        inverse = invert(m)
        yield Unit(AlgebraElement(algebra, coords, m), algebra.element(inverse), check=False)


class SigmaTable:
    """Conjugation actions of a list of units, as matrices on basis coordinates.

    Column k of ``action[g]`` holds the coordinates of sigma_g(basis[k]); the
    order law sigma_{ab} = sigma_b o sigma_a becomes action[ab] = action[b] @ action[a].
    """

    def __init__(self, algebra: Algebra, units: Sequence[Unit]):
        self.algebra = algebra
        self.units = list(units)
        self.index: Dict[Matrix, int] = {u.matrix: k for k, u in enumerate(self.units)}
        basis = algebra.basis
        field = algebra.field
        self.action: List[Matrix] = []
        for u in self.units:
            columns = [algebra.coordinates(u.inverse_matrix @ b @ u.matrix) for b in basis]
            entries = [columns[k][i] for i in range(algebra.dim) for k in range(algebra.dim)]
            self.action.append(Matrix(field, algebra.dim, algebra.dim, entries))

    def order_law_sweep(self) -> CheckResult:
        pairs = 0
        for i, a in enumerate(self.units):
            for j, b in enumerate(self.units):
                ab = self.index.get(a.matrix @ b.matrix)
                if ab is None:
                    return CheckResult(
                        name="sigma_order_sweep", passed=False,
                        counterexample={"reason": "unit list not closed under products", "pair": [i, j]},
                    )
                composite = self.action[j] @ self.action[i]
                if composite != self.action[ab]:
                    column = next(k for k in range(self.algebra.dim)
                                  if composite.column(k) != self.action[ab].column(k))
                    return CheckResult(
                        name="sigma_order_sweep", passed=False,
                        counterexample={"pair": [i, j], "basis_index": column,
                                        "a": a.to_json(), "b": b.to_json()},
                    )
                pairs += 1
        logger.info(f"sigma order law verified on {pairs} unit pairs of {self.algebra.name}")
        return CheckResult(name="sigma_order_sweep", passed=True,
                           details={"units": len(self.units), "pairs": pairs})


# -- homomorphisms ---------------------------------------------------------------

Image = Union[AlgebraElement, Matrix]


class AlgHom:
    """A unital homomorphism given by the images of the source basis.

    Construction certifies unitality and multiplicativity: on all basis
    pairs, or through the source's presentation when it has one.
    """

    def __init__(self, source: Algebra, target: Algebra, images: Sequence[Image],
                 name: str = "phi", certify: bool = True):
        if len(images) != source.dim:
            raise DimensionMismatchError(f"{len(images)} images for a {source.dim}-dimensional source")
        if source.field != target.field:
            raise FieldMismatchError("source and target must share a field")
        coerced: List[AlgebraElement] = []
        for k, image in enumerate(images):
            if isinstance(image, Matrix):
                coords = target.coordinates(image)
                if coords is None:
                    raise NotInAlgebraError(f"image of basis element {k} is not in {target.name}")
                image = AlgebraElement(target, coords, image)
            elif image.parent != target:
                raise ParentMismatchError(f"image of basis element {k} lives in {image.parent.name}, not {target.name}")
            coerced.append(image)
        self.source = source
        self.target = target
        self.images = tuple(coerced)
        self.name = name
        if certify:
            self.certify()

    # -- certification ---------------------------------------------------------------

    def certify(self) -> None:
        one = self.apply(self.source.one())
        if one != self.target.one():
            raise HomomorphismError(f"{self.name} does not map 1 to 1", {"image_of_one": one.to_json()})
        if self.source.presentation is not None and self.source.words is not None:
            self._certify_by_presentation()
        else:
            self._certify_on_pairs()
        logger.debug(f"certified hom {self.name}: {self.source.name} -> {self.target.name}")

    def _certify_on_pairs(self) -> None:
        table = self.source.structure_constants
        for i, xi in enumerate(self.images):
            for j, xj in enumerate(self.images):
                lhs = self._apply_coords(table[i][j])
                rhs = xi * xj
                if lhs != rhs:
                    raise HomomorphismError(
                        f"{self.name} is not multiplicative on basis pair ({i}, {j})",
                        {"pair": [i, j], "image_of_product": lhs.to_json(), "product_of_images": rhs.to_json()},
                    )

    def _certify_by_presentation(self) -> None:
        words = self.source.words
        index = self.source.word_index()
        generators = sorted((w[0], k) for k, w in enumerate(words) if len(w) == 1)
        gen_images = [self.images[k].matrix for _, k in generators]
        broken = self.source.presentation.violation(gen_images)
        if broken is not None:
            raise HomomorphismError(f"generator images of {self.name} break a defining relation", broken)
        for k, word in enumerate(words):
            if len(word) < 2:
                continue
            expected = self.images[index[word[:-1]]].matrix @ gen_images[word[-1]]
            if expected != self.images[k].matrix:
                raise HomomorphismError(
                    f"{self.name} disagrees with the product of generator images on word {list(word)}",
                    {"word": list(word)},
                )

    # -- evaluation --------------------------------------------------------------------

    def _apply_coords(self, coords: Coords) -> AlgebraElement:
        field = self.target.field
        acc = [field.zero] * self.target.dim
        for c, image in zip(coords, self.images):
            if not c:
                continue
            for k, y in enumerate(image.coords):
                if y:
                    acc[k] = field.add(acc[k], field.mul(c, y))
        return AlgebraElement(self.target, acc)

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        if x.parent != self.source:
            raise ParentMismatchError(f"{self.name} is defined on {self.source.name}, not {x.parent.name}")
        return self._apply_coords(x.coords)

    __call__ = apply

    def apply_matrix(self, m: Matrix) -> Matrix:
        return self.apply(self.source.element(m)).matrix

    def apply_unit(self, u: Unit) -> Unit:
        return Unit(self.apply(u.element), self.apply(u.inverse), check=False)

    def compose(self, other: "AlgHom", certify: bool = False) -> "AlgHom":
        """self o other: apply ``other`` first."""
        if other.target != self.source:
            raise EndpointMismatchError(
                f"cannot compose {self.name} after {other.name}: {other.target.name} is not {self.source.name}"
            )
        images = [self.apply(image) for image in other.images]
        return AlgHom(other.source, self.target, images, name=f"{self.name}.{other.name}", certify=certify)

    def same_endpoints(self, other: "AlgHom") -> bool:
        return self.source == other.source and self.target == other.target

    def is_identity(self) -> bool:
        return self.source == self.target and all(
            image == self.source.basis_element(k) for k, image in enumerate(self.images)
        )

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, AlgHom):
            return NotImplemented
        return self.same_endpoints(other) and self.images == other.images

    def __hash__(self) -> int:
        return hash((self.source.name, self.target.name, self.images))

    def __repr__(self) -> str:
        return f"AlgHom({self.name}: {self.source.name} -> {self.target.name})"

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "source": self.source.name,
            "target": self.target.name,
            "images": [image.to_json() for image in self.images],
        }

    # -- constructors ------------------------------------------------------------------

    @classmethod
    def identity(cls, algebra: Algebra) -> "AlgHom":
        return cls(algebra, algebra, algebra.basis_elements(), name=f"id_{algebra.name}", certify=False)

    @classmethod
    def from_generator_images(cls, source: Algebra, target: Algebra, generator_images: Sequence[Image],
                              name: str = "phi", certify: bool = True) -> "AlgHom":
        """Extend generator images along the word basis of ``source``."""
        if source.words is None:
            raise NotInAlgebraError(f"{source.name} has no word basis to extend along")
        gens = [g if isinstance(g, Matrix) else g.matrix for g in generator_images]
        index = source.word_index()
        images: List[Matrix] = []
        for word in source.words:
            if not word:
                images.append(Matrix.identity(target.ambient_dim, target.field))
            else:
                images.append(images[index[word[:-1]]] @ gens[word[-1]])
        return cls(source, target, images, name=name, certify=certify)


def conjugation_hom(algebra: Algebra, u: Unit, name: Optional[str] = None, certify: bool = True) -> AlgHom:
    """sigma_u as an automorphism of ``algebra``."""
    images = [inner_aut(u, x) for x in algebra.basis_elements()]
    return AlgHom(algebra, algebra, images, name=name or "sigma", certify=certify)


def twist(phi: AlgHom, u: Unit, name: Optional[str] = None) -> AlgHom:
    """sigma_u o phi for a unit u of phi's target."""
    if u.parent != phi.target:
        raise ParentMismatchError(f"unit of {u.parent.name} cannot twist a hom into {phi.target.name}")
    images = [inner_aut(u, image) for image in phi.images]
    return AlgHom(phi.source, phi.target, images, name=name or f"sigma.{phi.name}", certify=False)


def multiplicativity_sample(phi: AlgHom, rng: random.Random, pairs: int = 1000, height: int = 3) -> CheckResult:
    """phi(xy) = phi(x) phi(y) on random element pairs."""
    for k in range(pairs):
        x = phi.source.random_element(rng, height)
        y = phi.source.random_element(rng, height)
        if phi(x * y) != phi(x) * phi(y):
            return CheckResult(name="multiplicativity", passed=False,
                               counterexample={"sample": k, "x": x.to_json(), "y": y.to_json()})
    return CheckResult(name="multiplicativity", passed=True, details={"pairs": pairs})
