"""
Finite-dimensional unital algebras realized as closed subspaces of a full
matrix algebra.

An ``Algebra`` owns a basis of matrices together with a coordinate system that
expresses any matrix in the span as coefficients over that basis. Elements are
coordinate vectors; their matrices are materialized on demand.
"""
from __future__ import annotations

import logging
import random
from abc import ABC, abstractmethod
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..errors import (
    ClosureOverflowError,
    DimensionMismatchError,
    FieldMismatchError,
    NotInAlgebraError,
    ParentMismatchError,
)
from ..kernel import Matrix, ScalarField
from ..kernel.linalg import IncrementalEchelon, nullspace_raw, row_reduce

logger = logging.getLogger(__name__)

DEFAULT_CLOSURE_CAP = 4096

Coords = Tuple[Any, ...]
Word = Tuple[int, ...]


def combine(field: ScalarField, coefficients: Sequence[Any], matrices: Sequence[Matrix]) -> Matrix:
    """sum_k c_k M_k with raw coefficients."""
    first = matrices[0]
    acc = [field.zero] * len(first.entries)
    add, mul = field.add, field.mul
    for c, m in zip(coefficients, matrices):
        if not c:
            continue
        for idx, x in enumerate(m.entries):
            if x:
                acc[idx] = add(acc[idx], mul(c, x))
    return Matrix(field, first.rows, first.cols, acc)


# -- coordinate systems -----------------------------------------------------

class CoordinateSystem(ABC):
    """Maps a matrix to its coordinates over a fixed basis, or None off the span."""

    @abstractmethod
    def coordinates(self, m: Matrix) -> Optional[Coords]:
        ...


class FullCoordinates(CoordinateSystem):
    """Matrix units in row-major order: coordinates are the entries."""

    def coordinates(self, m: Matrix) -> Optional[Coords]:
        return m.entries


class PivotCoordinates(CoordinateSystem):
    """Generic span membership through a reduced echelon form of the basis.

    Each reduced row carries its combination of the basis vectors, so the
    pivot entries of a vector in the span determine its coordinates.
    """

    def __init__(self, field: ScalarField, vectors: Sequence[Sequence[Any]]):
        self.field = field
        self.dim = len(vectors)
        width = len(vectors[0])
        one, zero = field.one, field.zero
        work = [list(v) + [one if i == k else zero for k in range(self.dim)] for i, v in enumerate(vectors)]
        reduced, pivots = row_reduce(field, work, width)
        if len(pivots) < self.dim:
            raise DimensionMismatchError(
                f"basis is linearly dependent (rank {len(pivots)} < {self.dim})"
            )
        self.width = width
        self.pivots = pivots
        self.rows = [row[:width] for row in reduced]
        self.transforms = [row[width:] for row in reduced]

    def coordinates(self, m: Matrix) -> Optional[Coords]:
        field = self.field
        v = m.entries
        if len(v) != self.width:
            return None
        coords = [field.zero] * self.dim
        residual = list(v)
        for p, row, transform in zip(self.pivots, self.rows, self.transforms):
            f = v[p]
            if not f:
                continue
            for k, t in enumerate(transform):
                if t:
                    coords[k] = field.add(coords[k], field.mul(f, t))
            for j, x in enumerate(row):
                if x:
                    residual[j] = field.sub(residual[j], field.mul(f, x))
        if any(residual):
            return None
        return tuple(coords)


class TraceCoordinates(CoordinateSystem):
    """Bases of units with tr(b_j^-1 b_k) = n delta_jk spanning all of Mat_n.

    Majorana monomials are such a basis; the coordinate of b_k is tr(b_k^-1 M)/n.
    """

    def __init__(self, field: ScalarField, inverses: Sequence[Matrix], n: int):
        self.field = field
        self.inverses = list(inverses)
        self.scale = field.inv(field.coerce(n))

    def coordinates(self, m: Matrix) -> Optional[Coords]:
        field = self.field
        return tuple(field.mul(self.scale, inv.trace_of_product(m)) for inv in self.inverses)


# -- presentations -----------------------------------------------------------

class Presentation(ABC):
    """Defining relations for an algebra whose basis consists of generator words.

    A presentation must be complete: its universal algebra has the same
    dimension as the presented one, so generator images satisfying the
    relations determine a homomorphism.
    """

    @abstractmethod
    def violation(self, images: Sequence[Matrix]) -> Optional[Dict[str, Any]]:
        """First relation the generator images break, or None."""


# -- algebras ------------------------------------------------------------------

class Algebra:
    """A unital subalgebra of Mat_n over one exact field, given by a closed basis."""

    def __init__(
        self,
        basis: Sequence[Matrix],
        name: str = "A",
        words: Optional[Sequence[Word]] = None,
        coordinates: Optional[CoordinateSystem] = None,
        presentation: Optional[Presentation] = None,
        certify: bool = True,
    ):
        if not basis:
            raise DimensionMismatchError("an algebra needs a nonempty basis")
        field = basis[0].field
        n = basis[0].rows
        for k, b in enumerate(basis):
            if b.field != field:
                raise FieldMismatchError(f"basis element {k} is over {b.field.descriptor}, expected {field.descriptor}")
            if b.shape != (n, n):
                raise DimensionMismatchError(f"basis element {k} has shape {b.shape}, expected {(n, n)}")
        if words is not None and len(words) != len(basis):
            raise DimensionMismatchError("one word per basis element is required")

        self.name = name
        self.field = field
        self.ambient_dim = n
        self.basis: Tuple[Matrix, ...] = tuple(basis)
        self.words: Optional[Tuple[Word, ...]] = tuple(tuple(w) for w in words) if words is not None else None
        self.presentation = presentation
        self._coords = coordinates or PivotCoordinates(field, [b.entries for b in self.basis])
        self._identity = Matrix.identity(n, field)

        one = self._coords.coordinates(self._identity)
        if one is None:
            raise NotInAlgebraError(f"identity is not in the span of {name}")
        self._one_coords: Coords = tuple(one)
        if certify:
            # closure certificate; raises if some product leaves the span
            _ = self.structure_constants
        logger.debug(f"Algebra {name}: dim {self.dim} in Mat_{n}({field.descriptor})")

    # -- shape -----------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other: Any) -> bool:
        if self is other:
            return True
        if not isinstance(other, Algebra):
            return NotImplemented
        return self.field == other.field and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.field.descriptor, self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Algebra({self.name}, dim={self.dim}, ambient={self.ambient_dim}, field={self.field.descriptor})"

    def __contains__(self, m: Matrix) -> bool:
        return isinstance(m, Matrix) and self.coordinates(m) is not None

    def describe(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "field": self.field.descriptor,
            "ambient_dim": self.ambient_dim,
            "dim": self.dim,
        }

    # -- coordinates and elements -----------------------------------------------

    def coordinates(self, m: Matrix) -> Optional[Coords]:
        if m.field != self.field or m.shape != (self.ambient_dim, self.ambient_dim):
            return None
        return self._coords.coordinates(m)

    def element(self, m: Matrix) -> "AlgebraElement":
        if m.field != self.field:
            raise FieldMismatchError(
                f"matrix over {m.field.descriptor} offered to {self.name} over {self.field.descriptor}"
            )
        coords = self.coordinates(m)
        if coords is None:
            raise NotInAlgebraError(f"matrix is not in {self.name}", {"matrix": m.to_json()})
        return AlgebraElement(self, coords, m)

    def from_coords(self, coords: Sequence[Any]) -> "AlgebraElement":
        if len(coords) != self.dim:
            raise DimensionMismatchError(f"{len(coords)} coordinates for a {self.dim}-dimensional algebra")
        return AlgebraElement(self, tuple(self.field.coerce(c) for c in coords))

    def matrix_of(self, coords: Sequence[Any]) -> Matrix:
        return combine(self.field, coords, self.basis)

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, self._one_coords, self._identity)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, (self.field.zero,) * self.dim)

    def basis_element(self, k: int) -> "AlgebraElement":
        coords = [self.field.zero] * self.dim
        coords[k] = self.field.one
        return AlgebraElement(self, tuple(coords), self.basis[k])

    def basis_elements(self) -> List["AlgebraElement"]:
        return [self.basis_element(k) for k in range(self.dim)]

    def random_element(self, rng: random.Random, height: int = 3) -> "AlgebraElement":
        return AlgebraElement(self, tuple(self.field.random(rng, height) for _ in range(self.dim)))

    def word_index(self) -> Dict[Word, int]:
        if self.words is None:
            raise NotInAlgebraError(f"{self.name} has no word basis")
        return {w: k for k, w in enumerate(self.words)}

    # -- multiplication table ----------------------------------------------------

    @cached_property
    def structure_constants(self) -> List[List[Coords]]:
        """C[i][j] = coordinates of basis[i] @ basis[j]."""
        table: List[List[Coords]] = []
        for i, bi in enumerate(self.basis):
            row = []
            for j, bj in enumerate(self.basis):
                coords = self._coords.coordinates(bi @ bj)
                if coords is None:
                    raise NotInAlgebraError(
                        f"{self.name} is not closed under multiplication",
                        {"pair": [i, j]},
                    )
                row.append(tuple(coords))
            table.append(row)
        return table


class AlgebraElement:
    """Coordinates over the basis of ``parent``."""

    __slots__ = ("parent", "coords", "_matrix")

    def __init__(self, parent: Algebra, coords: Sequence[Any], matrix: Optional[Matrix] = None):
        if len(coords) != parent.dim:
            raise DimensionMismatchError(f"{len(coords)} coordinates for a {parent.dim}-dimensional algebra")
        self.parent = parent
        self.coords: Coords = tuple(coords)
        self._matrix = matrix

    @property
    def matrix(self) -> Matrix:
        if self._matrix is None:
            self._matrix = self.parent.matrix_of(self.coords)
        return self._matrix

    @property
    def field(self) -> ScalarField:
        return self.parent.field

    def _same_parent(self, other: "AlgebraElement") -> None:
        if other.parent is not self.parent and other.parent != self.parent:
            raise ParentMismatchError(
                f"elements of {self.parent.name} and {other.parent.name} cannot be combined"
            )

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same_parent(other)
        add = self.field.add
        return AlgebraElement(self.parent, [add(x, y) for x, y in zip(self.coords, other.coords)])

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same_parent(other)
        sub = self.field.sub
        return AlgebraElement(self.parent, [sub(x, y) for x, y in zip(self.coords, other.coords)])

    def __neg__(self) -> "AlgebraElement":
        neg = self.field.neg
        return AlgebraElement(self.parent, [neg(x) for x in self.coords])

    def scale(self, c: Any) -> "AlgebraElement":
        c = self.field.coerce(c)
        mul = self.field.mul
        return AlgebraElement(self.parent, [mul(c, x) for x in self.coords])

    def __mul__(self, other: Any) -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            return self.scale(other)
        self._same_parent(other)
        return self.parent.element(self.matrix @ other.matrix)

    def __rmul__(self, c: Any) -> "AlgebraElement":
        return self.scale(c)

    def power(self, k: int) -> "AlgebraElement":
        return self.parent.element(self.matrix.power(k))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_scalar(self) -> bool:
        return self.matrix.scalar_value() is not None

    def commutes_with(self, other: "AlgebraElement") -> bool:
        self._same_parent(other)
        return self.matrix.commutes_with(other.matrix)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (other.parent is self.parent or other.parent == self.parent) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.parent.name, self.coords))

    def to_json(self) -> List[List[str]]:
        return self.matrix.to_json()

    def __repr__(self) -> str:
        return f"AlgebraElement({self.parent.name}, {self.matrix!r})"


# -- constructions -------------------------------------------------------------

def closure(
    generators: Sequence[Matrix],
    ambient_dim: int,
    field: Optional[ScalarField] = None,
    name: str = "A",
    cap: int = DEFAULT_CLOSURE_CAP,
) -> Algebra:
    """Smallest unital subalgebra of Mat_n containing ``generators``.

    Words are grown breadth-first by right multiplication; a word joins the
    basis when it is independent of the words found so far. Every basis
    element is recorded with its generator word, so the basis is prefix-closed.
    """
    if field is None:
        if not generators:
            raise DimensionMismatchError("closure of no generators needs an explicit field")
        field = generators[0].field
    for k, g in enumerate(generators):
        if g.field != field:
            raise FieldMismatchError(f"generator {k} is over {g.field.descriptor}, expected {field.descriptor}")
        if g.shape != (ambient_dim, ambient_dim):
            raise DimensionMismatchError(f"generator {k} has shape {g.shape}, expected {(ambient_dim, ambient_dim)}")

    echelon = IncrementalEchelon(field, ambient_dim * ambient_dim)
    identity = Matrix.identity(ambient_dim, field)
    echelon.add(identity.entries)
    basis: List[Matrix] = [identity]
    words: List[Word] = [()]
    frontier = [0]
    while frontier:
        next_frontier: List[int] = []
        for idx in frontier:
            for g_index, g in enumerate(generators):
                candidate = basis[idx] @ g
                if echelon.add(candidate.entries) is not None:
                    continue
                basis.append(candidate)
                words.append(words[idx] + (g_index,))
                if len(basis) > cap:
                    raise ClosureOverflowError(
                        f"closure of {len(generators)} generators exceeds the cap of {cap}",
                        {"cap": cap},
                    )
                next_frontier.append(len(basis) - 1)
        frontier = next_frontier
    logger.info(f"closure {name}: {len(generators)} generators span dimension {len(basis)}")
    return Algebra(basis, name=name, words=words)


def full_matrix_algebra(n: int, field: ScalarField, name: Optional[str] = None) -> Algebra:
    """Mat_n with the matrix-unit basis in row-major order."""
    basis = [Matrix.unit(n, i, j, field) for i in range(n) for j in range(n)]
    return Algebra(basis, name=name or f"Mat{n}", coordinates=FullCoordinates(), certify=n <= 3)


def centralizer_in(algebra: Algebra, elements: Sequence[AlgebraElement]) -> List[AlgebraElement]:
    """Basis of {z in algebra : z s = s z for every s in elements}."""
    field = algebra.field
    for s in elements:
        if s.field != field:
            raise FieldMismatchError("centralizer over mixed fields")
    # column k of the system holds the entries of [b_k, s] for each s
    columns: List[List[Any]] = []
    for b in algebra.basis:
        column: List[Any] = []
        for s in elements:
            column.extend((b @ s.matrix - s.matrix @ b).entries)
        columns.append(column)
    nrows = len(columns[0]) if columns else 0
    rows = [[columns[k][e] for k in range(algebra.dim)] for e in range(nrows)]
    solutions = nullspace_raw(field, rows, algebra.dim)
    return [AlgebraElement(algebra, v) for v in solutions]


def center(algebra: Algebra) -> List[AlgebraElement]:
    return centralizer_in(algebra, algebra.basis_elements())


def span_dimension(elements: Sequence[AlgebraElement]) -> int:
    if not elements:
        return 0
    field = elements[0].field
    echelon = IncrementalEchelon(field, len(elements[0].coords))
    for e in elements:
        echelon.add(e.coords)
    return len(echelon)
