"""
Immutable dense matrices over one exact field.
"""
from __future__ import annotations

import logging
import random
from typing import Any, Iterable, List, Optional, Sequence, Tuple

from ..errors import DimensionMismatchError, FieldMismatchError
from .scalars import GAUSS, Scalar, ScalarField, common_field

logger = logging.getLogger(__name__)


class Matrix:
    """A rows x cols matrix whose entries are raw values of ``field``."""

    __slots__ = ("field", "rows", "cols", "entries", "_hash")

    def __init__(self, field: ScalarField, rows: int, cols: int, entries: Sequence[Any]):
        if rows * cols != len(entries):
            raise DimensionMismatchError(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}"
            )
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries: Tuple[Any, ...] = tuple(entries)
        self._hash: Optional[int] = None

    # -- construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], field: Optional[ScalarField] = None) -> "Matrix":
        flat = [entry for row in rows for entry in row]
        if field is None:
            field = common_field(flat)
        width = len(rows[0]) if rows else 0
        if any(len(row) != width for row in rows):
            raise DimensionMismatchError("ragged rows")
        return cls(field, len(rows), width, [field.coerce(entry) for entry in flat])

    @classmethod
    def identity(cls, n: int, field: ScalarField = GAUSS) -> "Matrix":
        zero, one = field.zero, field.one
        return cls(field, n, n, [one if i == j else zero for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int, field: ScalarField = GAUSS) -> "Matrix":
        return cls(field, rows, cols, [field.zero] * (rows * cols))

    @classmethod
    def unit(cls, n: int, i: int, j: int, field: ScalarField = GAUSS) -> "Matrix":
        """The matrix unit e_ij (zero-based indices)."""
        entries = [field.zero] * (n * n)
        entries[i * n + j] = field.one
        return cls(field, n, n, entries)

    @classmethod
    def diagonal(cls, values: Sequence[Any], field: Optional[ScalarField] = None) -> "Matrix":
        field = field or common_field(values)
        n = len(values)
        entries = [field.zero] * (n * n)
        for k, value in enumerate(values):
            entries[k * n + k] = field.coerce(value)
        return cls(field, n, n, entries)

    @classmethod
    def from_vector(cls, field: ScalarField, n: int, vector: Sequence[Any]) -> "Matrix":
        return cls(field, n, n, vector)

    @classmethod
    def random(cls, n: int, field: ScalarField, rng: random.Random, height: int = 3) -> "Matrix":
        return cls(field, n, n, [field.random(rng, height) for _ in range(n * n)])

    # -- access -------------------------------------------------------------

    def raw(self, i: int, j: int) -> Any:
        return self.entries[i * self.cols + j]

    def __getitem__(self, index: Tuple[int, int]) -> Scalar:
        i, j = index
        return self.field.wrap(self.raw(i, j))

    def row(self, i: int) -> Tuple[Any, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Tuple[Any, ...]:
        return self.entries[j::self.cols]

    def columns(self) -> List[Tuple[Any, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def to_rows(self) -> List[List[Any]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    # -- arithmetic ---------------------------------------------------------

    def _check_compatible(self, other: "Matrix") -> None:
        if other.field != self.field:
            raise FieldMismatchError(
                "matrices over different fields",
                {"left": self.field.descriptor, "right": other.field.descriptor},
            )

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_compatible(other)
        if self.shape != other.shape:
            raise DimensionMismatchError(f"cannot add {self.shape} and {other.shape}")
        add = self.field.add
        return Matrix(self.field, self.rows, self.cols,
                      [add(x, y) for x, y in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_compatible(other)
        if self.shape != other.shape:
            raise DimensionMismatchError(f"cannot subtract {other.shape} from {self.shape}")
        sub = self.field.sub
        return Matrix(self.field, self.rows, self.cols,
                      [sub(x, y) for x, y in zip(self.entries, other.entries)])

    def __neg__(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, self.rows, self.cols, [neg(x) for x in self.entries])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_compatible(other)
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        dot = self.field.dot
        cols = other.columns()
        entries = []
        for i in range(self.rows):
            row = self.row(i)
            entries.extend(dot(row, col) for col in cols)
        return Matrix(self.field, self.rows, other.cols, entries)

    def scale(self, c: Any) -> "Matrix":
        c = self.field.coerce(c)
        mul = self.field.mul
        return Matrix(self.field, self.rows, self.cols, [mul(c, x) for x in self.entries])

    def __mul__(self, c: Any) -> "Matrix":
        if isinstance(c, Matrix):
            return self @ c
        return self.scale(c)

    __rmul__ = scale

    def power(self, k: int) -> "Matrix":
        result = Matrix.identity(self.rows, self.field)
        base = self
        while k > 0:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product self (x) other."""
        self._check_compatible(other)
        mul = self.field.mul
        rows, cols = self.rows * other.rows, self.cols * other.cols
        entries = []
        for i in range(self.rows):
            for k in range(other.rows):
                for j in range(self.cols):
                    x = self.raw(i, j)
                    entries.extend(mul(x, y) for y in other.row(k))
        return Matrix(self.field, rows, cols, entries)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows,
                      [self.raw(i, j) for j in range(self.cols) for i in range(self.rows)])

    def conjugate_transpose(self) -> "Matrix":
        conj = self.field.conjugate
        return Matrix(self.field, self.cols, self.rows,
                      [conj(self.raw(i, j)) for j in range(self.cols) for i in range(self.rows)])

    def trace_raw(self) -> Any:
        total = self.field.zero
        for k in range(min(self.rows, self.cols)):
            total = self.field.add(total, self.raw(k, k))
        return total

    def trace(self) -> Scalar:
        return self.field.wrap(self.trace_raw())

    def trace_of_product(self, other: "Matrix") -> Any:
        """tr(self @ other) without forming the product."""
        dot = self.field.dot
        total = self.field.zero
        for i in range(self.rows):
            total = self.field.add(total, dot(self.row(i), other.column(i)))
        return total

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_identity(self) -> bool:
        return self == Matrix.identity(self.rows, self.field)

    def scalar_value(self) -> Optional[Any]:
        """The raw c with self = c*I, or None when self is not scalar."""
        if not self.is_square:
            return None
        c = self.raw(0, 0)
        for i in range(self.rows):
            for j in range(self.cols):
                expected = c if i == j else self.field.zero
                if self.raw(i, j) != expected:
                    return None
        return c

    def scalar_ratio(self, other: "Matrix") -> Optional[Any]:
        """The raw c with self = c*other, or None (also when other is zero)."""
        self._check_compatible(other)
        if self.shape != other.shape:
            return None
        k = next((k for k, y in enumerate(other.entries) if y), None)
        if k is None:
            return None
        c = self.field.div(self.entries[k], other.entries[k])
        return c if self == other.scale(c) else None

    def commutes_with(self, other: "Matrix") -> bool:
        return self @ other == other @ self

    # -- identity and serialization ----------------------------------------

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field.descriptor, self.rows, self.cols, self.entries))
        return self._hash

    def to_json(self) -> List[List[str]]:
        fmt = self.field.format
        return [[fmt(x) for x in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[Any]], field: ScalarField) -> "Matrix":
        return cls.from_rows(data, field)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(self.field.format(x) for x in self.row(i)) for i in range(self.rows))
        return f"Matrix[{self.field.descriptor}]({body})"


def stack_vectors(matrices: Iterable[Matrix]) -> List[List[Any]]:
    """Flatten each matrix to its row-major entry vector."""
    return [list(m.entries) for m in matrices]
