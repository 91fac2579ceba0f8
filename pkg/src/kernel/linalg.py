"""
Exact row reduction and the solvers built on it.
"""
from __future__ import annotations

import logging
from typing import Any, List, Optional, Sequence, Tuple

from ..errors import DimensionMismatchError, NotAUnitError
from .matrix import Matrix
from .scalars import GAUSS, Scalar, ScalarField, common_field

logger = logging.getLogger(__name__)

Vector = Tuple[Any, ...]


def row_reduce(field: ScalarField, rows: List[List[Any]], ncols: int) -> Tuple[List[List[Any]], List[int]]:
    """Reduced row echelon form, in place. Returns (nonzero rows, pivot columns).

    Pivots are chosen among the first ``ncols`` columns; row operations run over
    the full row, so trailing columns act as an augmented block.
    """
    pivots: List[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = next((k for k in range(r, nrows) if rows[k][c]), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = field.inv(rows[r][c])
        if inv != field.one:
            rows[r] = [field.mul(inv, x) for x in rows[r]]
        pivot = rows[r]
        support = [j for j in range(c, len(pivot)) if pivot[j]]
        for k in range(nrows):
            if k == r:
                continue
            factor = rows[k][c]
            if not factor:
                continue
            row = rows[k]
            for j in support:
                row[j] = field.sub(row[j], field.mul(factor, pivot[j]))
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def nullspace_raw(field: ScalarField, rows: Sequence[Sequence[Any]], ncols: int) -> List[Vector]:
    """Basis of {v : rows . v = 0} in raw values, one vector per free column."""
    work = [list(row) for row in rows if any(row)]
    reduced, pivots = row_reduce(field, work, ncols)
    pivot_set = set(pivots)
    basis: List[Vector] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [field.zero] * ncols
        v[free] = field.one
        for row, p in zip(reduced, pivots):
            if row[free]:
                v[p] = field.neg(row[free])
        basis.append(tuple(v))
    return basis


def solve_linear(system: Sequence[Sequence[Any]], unknowns: int,
                 field: Optional[ScalarField] = None) -> List[Tuple[Scalar, ...]]:
    """Basis of the solution space of a homogeneous system.

    Each constraint is a coefficient row of length ``unknowns``. An empty
    result means only the zero solution.
    """
    flat = [c for row in system for c in row]
    field = field or common_field(flat, GAUSS)
    for k, row in enumerate(system):
        if len(row) != unknowns:
            raise DimensionMismatchError(
                f"constraint {k} has {len(row)} coefficients, expected {unknowns}"
            )
    rows = [[field.coerce(c) for c in row] for row in system]
    basis = nullspace_raw(field, rows, unknowns)
    logger.debug(f"solve_linear: {len(system)} constraints, {unknowns} unknowns, nullity {len(basis)}")
    return [tuple(field.wrap(x) for x in v) for v in basis]


def intertwiner_kernel(lefts: Sequence[Matrix], rights: Sequence[Matrix]) -> List[Matrix]:
    """Basis of {U : L_k U = U R_k for every k}, the Sylvester system in the entries of U."""
    if len(lefts) != len(rights) or not lefts:
        raise DimensionMismatchError("intertwiner system needs matching nonempty lists")
    field = lefts[0].field
    n = lefts[0].rows
    rows: List[List[Any]] = []
    for L, R in zip(lefts, rights):
        if L.shape != (n, n) or R.shape != (n, n):
            raise DimensionMismatchError(f"intertwiner system mixes shapes {L.shape} and {R.shape}")
        for a in range(n):
            for b in range(n):
                row = [field.zero] * (n * n)
                for i in range(n):
                    x = L.raw(a, i)
                    if x:
                        row[i * n + b] = field.add(row[i * n + b], x)
                for j in range(n):
                    y = R.raw(j, b)
                    if y:
                        row[a * n + j] = field.sub(row[a * n + j], y)
                rows.append(row)
    return [Matrix(field, n, n, v) for v in nullspace_raw(field, rows, n * n)]


def rank_raw(field: ScalarField, vectors: Sequence[Sequence[Any]], ncols: int) -> int:
    _, pivots = row_reduce(field, [list(v) for v in vectors], ncols)
    return len(pivots)


def rank(m: Matrix) -> int:
    return rank_raw(m.field, m.to_rows(), m.cols)


def invert(m: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises NotAUnitError for a singular matrix."""
    if not m.is_square:
        raise DimensionMismatchError(f"cannot invert a {m.rows}x{m.cols} matrix")
    n = m.rows
    field = m.field
    zero, one = field.zero, field.one
    work = [list(m.row(i)) + [one if i == j else zero for j in range(n)] for i in range(n)]
    reduced, pivots = row_reduce(field, work, n)
    if len(pivots) < n:
        raise NotAUnitError("singular matrix", {"matrix": m.to_json()})
    return Matrix(field, n, n, [x for row in reduced for x in row[n:]])


def determinant(m: Matrix) -> Scalar:
    if not m.is_square:
        raise DimensionMismatchError("determinant of a non-square matrix")
    field = m.field
    n = m.rows
    rows = m.to_rows()
    det = field.one
    for c in range(n):
        pivot_row = next((k for k in range(c, n) if rows[k][c]), None)
        if pivot_row is None:
            return field.wrap(field.zero)
        if pivot_row != c:
            rows[c], rows[pivot_row] = rows[pivot_row], rows[c]
            det = field.neg(det)
        det = field.mul(det, rows[c][c])
        inv = field.inv(rows[c][c])
        for k in range(c + 1, n):
            factor = rows[k][c]
            if not factor:
                continue
            factor = field.mul(factor, inv)
            rows[k] = [field.sub(x, field.mul(factor, y)) for x, y in zip(rows[k], rows[c])]
    return field.wrap(det)


def is_invertible(m: Matrix) -> bool:
    return m.is_square and rank(m) == m.rows


class IncrementalEchelon:
    """An independent set grown one vector at a time.

    Stored rows are normalized at their pivot and reduced against all earlier
    pivots, so reducing a new vector in insertion order clears every pivot.
    With ``track`` set, each row also records its combination of the input
    vectors, which turns a dependency into explicit coefficients.
    """

    def __init__(self, field: ScalarField, width: int, track: bool = False):
        self.field = field
        self.width = width
        self.track = track
        self.rows: List[Tuple[int, List[Any], List[Any]]] = []
        self.inputs = 0

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vector: Sequence[Any]) -> Tuple[List[Any], List[Any]]:
        field = self.field
        v = list(vector)
        combo = [field.zero] * (self.inputs + 1) if self.track else []
        if self.track:
            combo[self.inputs] = field.one
        for pivot, row, row_combo in self.rows:
            factor = v[pivot]
            if not factor:
                continue
            for j in range(pivot, self.width):
                if row[j]:
                    v[j] = field.sub(v[j], field.mul(factor, row[j]))
            for j, c in enumerate(row_combo):
                if c:
                    combo[j] = field.sub(combo[j], field.mul(factor, c))
        return v, combo

    def add(self, vector: Sequence[Any]) -> Optional[List[Any]]:
        """Insert ``vector``; returns None if independent, else its dependency combination."""
        v, combo = self.reduce(vector)
        self.inputs += 1
        pivot = next((j for j, x in enumerate(v) if x), None)
        if pivot is None:
            return combo if self.track else []
        inv = self.field.inv(v[pivot])
        v = [self.field.mul(inv, x) for x in v]
        combo = [self.field.mul(inv, c) for c in combo]
        self.rows.append((pivot, v, combo))
        return None

    def contains(self, vector: Sequence[Any]) -> bool:
        v, _ = self.reduce(vector)
        return not any(v)


def minimal_polynomial_raw(m: Matrix) -> List[Any]:
    if not m.is_square:
        raise DimensionMismatchError("minimal polynomial of a non-square matrix")
    field = m.field
    echelon = IncrementalEchelon(field, m.rows * m.cols, track=True)
    power = Matrix.identity(m.rows, field)
    for degree in range(m.rows + 1):
        dependency = echelon.add(power.entries)
        if dependency is not None:
            # dependency has a 1 at the current degree
            return list(dependency[:degree + 1])
        power = power @ m
    raise AssertionError("Cayley-Hamilton bound exceeded")


def minimal_polynomial(m: Matrix) -> List[Scalar]:
    """Monic minimal polynomial, coefficients in ascending degree."""
    return [m.field.wrap(c) for c in minimal_polynomial_raw(m)]


def evaluate_polynomial(coefficients: Sequence[Any], m: Matrix) -> Matrix:
    """Horner evaluation of sum c_k m^k; coefficients are Scalars or raw values."""
    field = m.field
    result = Matrix.zeros(m.rows, m.cols, field)
    identity = Matrix.identity(m.rows, field)
    for c in reversed(list(coefficients)):
        result = result @ m + identity.scale(field.coerce(c))
    return result


def polynomial_inverse(m: Matrix) -> Matrix:
    """Inverse of a unit as a polynomial in itself, from its minimal polynomial."""
    coeffs = minimal_polynomial_raw(m)
    field = m.field
    c0 = coeffs[0]
    if not c0:
        raise NotAUnitError("minimal polynomial has zero constant term", {"matrix": m.to_json()})
    # m^{-1} = -(1/c0) * (m^{k-1} + c_{k-1} m^{k-2} + ... + c_1)
    shifted = coeffs[1:]
    scale = field.neg(field.inv(c0))
    return evaluate_polynomial(shifted, m).scale(scale)
