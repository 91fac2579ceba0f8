"""
Instance files read by the CLI.

Every file is JSON. Matrices are lists of rows whose entries are strings
("1/2", "1/2+3*i", "3 mod 5") or integers; they are read in the field given
by the file or by ``--field``. Pydantic validation errors and kernel errors
are reported as InstanceFileError with the file name and a line number.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from ..algebra import Algebra, AlgHom, Unit, closure, conjugation_hom, full_matrix_algebra
from ..errors import InstanceFileError, VerifierError
from ..interval import InteriorDiffeo, PLMap
from ..kernel import Matrix, ScalarField, get_field

logger = logging.getLogger(__name__)

MatrixRows = List[List[Union[str, int]]]
M = TypeVar("M", bound=BaseModel)


class AlgebraFile(BaseModel):
    """One of ``full`` (Mat_n), ``basis`` (a closed basis) or ``generators`` (closure)."""
    name: str = "A"
    field: Optional[str] = Field(default=None, description="gauss or fp:<p>; --field when absent")
    full: Optional[int] = Field(default=None, description="n for the full matrix algebra Mat_n")
    basis: Optional[List[MatrixRows]] = None
    generators: Optional[List[MatrixRows]] = None
    ambient_dim: Optional[int] = Field(default=None, description="Needed only for generators = []")

    @model_validator(mode="after")
    def _one_description(self) -> "AlgebraFile":
        given = [key for key in ("full", "basis", "generators") if getattr(self, key) is not None]
        if len(given) != 1:
            raise ValueError(f"give exactly one of full, basis, generators (found {given or 'none'})")
        return self


class HomFile(BaseModel):
    """Basis images, generator images, or ``conjugation`` by a unit of the algebra."""
    name: str = "phi"
    images: Optional[List[MatrixRows]] = None
    generator_images: Optional[List[MatrixRows]] = None
    conjugation: Optional[MatrixRows] = None

    @model_validator(mode="after")
    def _one_description(self) -> "HomFile":
        given = [key for key in ("images", "generator_images", "conjugation") if getattr(self, key) is not None]
        if len(given) != 1:
            raise ValueError(f"give exactly one of images, generator_images, conjugation (found {given or 'none'})")
        return self


class UnitFile(BaseModel):
    matrix: MatrixRows


class CellFile(BaseModel):
    """A proposed 2-cell (a, b): src -> dst between homs of one source and target."""
    src: HomFile
    dst: HomFile
    a: MatrixRows = Field(description="Unit of the source algebra")
    b: MatrixRows = Field(description="Unit of the target algebra")


class StateFile(BaseModel):
    state: MatrixRows
    x: Optional[MatrixRows] = None
    y: Optional[MatrixRows] = None


class DiffeoFile(BaseModel):
    pl: Dict[str, Any]
    collar: Optional[Union[str, int]] = Field(default=None, description="Widest admissible collar when absent")


class IntervalCellFile(BaseModel):
    src: Dict[str, Any]
    dst: Dict[str, Any]
    a: Dict[str, Any]
    b: Dict[str, Any]


# -- reading -----------------------------------------------------------------------


def _line_of(text: str, loc: Sequence[Any]) -> int:
    """Best-effort line of the innermost key named in a validation location."""
    for key in reversed(loc):
        if isinstance(key, str):
            index = text.find(f'"{key}"')
            if index >= 0:
                return text.count("\n", 0, index) + 1
    return 1


def _read(path: Union[str, Path]) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InstanceFileError(f"cannot read {path}: {exc.strerror}", {"file": str(path), "line": None}) from exc
    try:
        return text, json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFileError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}",
                                {"file": str(path), "line": exc.lineno, "column": exc.colno}) from exc


def read_model(path: Union[str, Path], model: Type[M], wrap_key: Optional[str] = None) -> M:
    """Validate the JSON in ``path`` against ``model``.

    ``wrap_key`` lets a bare value stand for a one-field model, so a unit file
    may hold just the matrix rows.
    """
    text, data = _read(path)
    if wrap_key is not None and not isinstance(data, dict):
        data = {wrap_key: data}
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        line = _line_of(text, first.get("loc", ()))
        where = ".".join(str(part) for part in first.get("loc", ())) or "<root>"
        raise InstanceFileError(f"{path}:{line}: {where}: {first.get('msg')}",
                                {"file": str(path), "line": line, "errors": exc.errors(include_url=False, include_context=False)}) from exc


def _guard(path: Union[str, Path], build, *args):
    """Run a constructor and report kernel errors against the file they came from."""
    try:
        return build(*args)
    except InstanceFileError:
        raise
    except VerifierError as exc:
        raise InstanceFileError(f"{path}: {exc.message}", {"file": str(path), "line": None, "cause": exc.to_dict()}) from exc


def _matrix(rows: MatrixRows, field: ScalarField) -> Matrix:
    return Matrix.from_json(rows, field)


def load_algebra(path: Union[str, Path], field: ScalarField, closure_cap: int = 4096) -> Algebra:
    spec = read_model(path, AlgebraFile)
    if spec.field is not None:
        file_field = _guard(path, get_field, spec.field)
        if file_field != field:
            logger.info(f"{path} declares {spec.field}, overriding {field.descriptor}")
        field = file_field

    def build() -> Algebra:
        if spec.full is not None:
            return full_matrix_algebra(spec.full, field, name=spec.name)
        if spec.basis is not None:
            return Algebra([_matrix(rows, field) for rows in spec.basis], name=spec.name)
        generators = [_matrix(rows, field) for rows in spec.generators]
        n = spec.ambient_dim or (generators[0].rows if generators else None)
        if n is None:
            raise InstanceFileError("generators = [] needs ambient_dim", {"file": str(path)})
        return closure(generators, n, field=field, name=spec.name, cap=closure_cap)

    algebra = _guard(path, build)
    logger.debug(f"loaded {algebra!r} from {path}")
    return algebra


def _build_hom(path: Union[str, Path], spec: HomFile, source: Algebra, target: Algebra) -> AlgHom:
    field = target.field
    if spec.conjugation is not None:
        if target != source:
            raise InstanceFileError("a conjugation hom needs equal source and target", {"file": str(path)})
        return conjugation_hom(source, Unit.from_matrix(source, _matrix(spec.conjugation, field)), name=spec.name)
    if spec.generator_images is not None:
        images = [_matrix(rows, field) for rows in spec.generator_images]
        return AlgHom.from_generator_images(source, target, images, name=spec.name)
    return AlgHom(source, target, [_matrix(rows, field) for rows in spec.images], name=spec.name)


def load_hom(path: Union[str, Path], source: Algebra, target: Optional[Algebra] = None) -> AlgHom:
    spec = read_model(path, HomFile)
    return _guard(path, _build_hom, path, spec, source, target or source)


def load_cell(path: Union[str, Path], source: Algebra,
              target: Optional[Algebra] = None) -> Tuple[AlgHom, AlgHom, Unit, Unit]:
    """(phi0, phi1, a, b) of a proposed 2-cell, not yet certified."""
    spec = read_model(path, CellFile)
    target = target or source

    def build() -> Tuple[AlgHom, AlgHom, Unit, Unit]:
        return (_build_hom(path, spec.src, source, target),
                _build_hom(path, spec.dst, source, target),
                Unit.from_matrix(source, _matrix(spec.a, source.field)),
                Unit.from_matrix(target, _matrix(spec.b, target.field)))

    return _guard(path, build)


def load_unit(path: Union[str, Path], algebra: Algebra) -> Unit:
    spec = read_model(path, UnitFile, wrap_key="matrix")
    return _guard(path, lambda: Unit.from_matrix(algebra, _matrix(spec.matrix, algebra.field)))


def load_state(path: Union[str, Path], field: ScalarField) -> StateFile:
    spec = read_model(path, StateFile, wrap_key="state")
    _guard(path, _matrix, spec.state, field)
    return spec


def pl_map_from(data: Dict[str, Any]) -> PLMap:
    return PLMap.model_validate(data)


def diffeo_from(data: Dict[str, Any]) -> InteriorDiffeo:
    """A diffeo in the shape of ``InteriorDiffeo.to_json`` or of DiffeoFile."""
    if "pl" in data:
        spec = DiffeoFile.model_validate(data)
        body, collar = spec.pl, spec.collar
    else:
        body = {key: value for key, value in data.items() if key != "collar"}
        collar = data.get("collar")
    pl = pl_map_from(body)
    if collar is None:
        return InteriorDiffeo.from_map(pl)
    return InteriorDiffeo(pl=pl, collar=collar)


def load_pl_map(path: Union[str, Path]) -> PLMap:
    _, data = _read(path)
    return _guard(path, _validated, path, pl_map_from, data)


def load_diffeo(path: Union[str, Path]) -> InteriorDiffeo:
    _, data = _read(path)
    return _guard(path, _validated, path, diffeo_from, data)


def load_interval_square(path: Union[str, Path]) -> Tuple[PLMap, PLMap, InteriorDiffeo, InteriorDiffeo]:
    """(src, dst, a, b) of a proposed interval 2-cell, not yet certified."""
    spec = read_model(path, IntervalCellFile)

    def build() -> Tuple[PLMap, PLMap, InteriorDiffeo, InteriorDiffeo]:
        return pl_map_from(spec.src), pl_map_from(spec.dst), diffeo_from(spec.a), diffeo_from(spec.b)

    return _guard(path, _validated, path, build)


def _validated(path: Union[str, Path], build, *args):
    try:
        return build(*args)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise InstanceFileError(f"{path}: {'.'.join(str(p) for p in first.get('loc', ()))}: {first.get('msg')}",
                                {"file": str(path), "line": None}) from exc
