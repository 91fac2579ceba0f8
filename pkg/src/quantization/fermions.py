"""
Discretized free fermions: interior lattice sites of an interval and the
Clifford algebra of Majorana operators on them, in Jordan-Wigner form.
"""
from __future__ import annotations

import logging
from functools import cached_property, lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from ..algebra import AlgHom, Algebra, Presentation, TraceCoordinates
from ..errors import DimensionMismatchError, SiteCapError, SiteIncompatibleError, VerifierError
from ..interval.pl import Interval, PLMap
from ..kernel import GAUSS, GaussianRational, Matrix
from .sites import SiteEmbedding, SiteSet

logger = logging.getLogger(__name__)

DEFAULT_SITE_CAP = 6

_ONE = GaussianRational(1)
_ZERO = GaussianRational(0)
_I = GaussianRational(0, 1)

PAULI_X = Matrix(GAUSS, 2, 2, [_ZERO, _ONE, _ONE, _ZERO])
PAULI_Y = Matrix(GAUSS, 2, 2, [_ZERO, -_I, _I, _ZERO])
PAULI_Z = Matrix(GAUSS, 2, 2, [_ONE, _ZERO, _ZERO, -_ONE])
IDENTITY_2 = Matrix.identity(2, GAUSS)


def _kron_all(factors: Sequence[Matrix]) -> Matrix:
    result = factors[0]
    for factor in factors[1:]:
        result = result.kron(factor)
    return result


def majorana_factors(modes: int) -> List[List[Matrix]]:
    """Tensor factors of gamma_{2j} = Z..Z X I..I and gamma_{2j+1} = Z..Z Y I..I."""
    factors: List[List[Matrix]] = []
    for j in range(modes):
        prefix = [PAULI_Z] * j
        suffix = [IDENTITY_2] * (modes - j - 1)
        factors.append(prefix + [PAULI_X] + suffix)
        factors.append(prefix + [PAULI_Y] + suffix)
    return factors


def majorana_generators(modes: int) -> List[Matrix]:
    return [_kron_all(f) for f in majorana_factors(modes)]


class CliffordPresentation(Presentation):
    """gamma_j gamma_k + gamma_k gamma_j = 2 delta_jk."""

    def __init__(self, count: int):
        self.count = count

    def violation(self, images: Sequence[Matrix]) -> Optional[Dict[str, Any]]:
        if len(images) != self.count:
            return {"reason": f"{len(images)} generator images, expected {self.count}"}
        n = images[0].rows
        identity = Matrix.identity(n, images[0].field)
        two = identity.scale(2)
        zero = Matrix.zeros(n, n, images[0].field)
        for j in range(self.count):
            for k in range(j, self.count):
                anticommutator = images[j] @ images[k] + images[k] @ images[j]
                expected = two if j == k else zero
                if anticommutator != expected:
                    return {"pair": [j, k]}
        return None


class CarAlgebra:
    """Majorana generators on a site set and the full matrix algebra they span.

    The basis is the ordered monomials gamma_S for subsets S of generator
    indices, each stored with its word S, so homomorphisms certify through
    the Clifford presentation.
    """

    def __init__(self, sites: SiteSet, site_cap: int = DEFAULT_SITE_CAP):
        if sites.count > site_cap:
            raise SiteCapError(
                f"{sites.count} sites exceed the cap of {site_cap}",
                {"sites": sites.count, "cap": site_cap},
            )
        self.sites = sites
        self.modes = sites.count
        self._factors = majorana_factors(self.modes)
        self.generators = [_kron_all(f) for f in self._factors]
        broken = CliffordPresentation(len(self.generators)).violation(self.generators)
        if broken is not None:
            raise VerifierError("Majorana generators break the Clifford relations", broken)
        self.algebra = self._build_algebra()
        if self.algebra.dim != 4 ** self.modes:
            raise DimensionMismatchError(
                f"monomials span dimension {self.algebra.dim}, expected {4 ** self.modes}"
            )
        logger.info(f"quantized {sites.interval} at r={sites.resolution}: "
                    f"{len(self.generators)} generators, dimension {self.algebra.dim}")

    def monomial(self, word: Sequence[int]) -> Matrix:
        """gamma_{w1} ... gamma_{wk}, multiplied factor by factor."""
        factors = [IDENTITY_2] * self.modes
        for k in word:
            factors = [f @ g for f, g in zip(factors, self._factors[k])]
        return _kron_all(factors)

    def _build_algebra(self) -> Algebra:
        count = len(self.generators)
        n = 2 ** self.modes
        subsets = sorted(
            (tuple(k for k in range(count) if mask >> k & 1) for mask in range(1 << count)),
            key=lambda s: (len(s), s),
        )
        basis = [self.monomial(w) for w in subsets]
        inverses = [self.monomial(tuple(reversed(w))) for w in subsets]
        # gamma_S^-1 gamma_T = +-gamma_{S xor T}, so tracelessness gives trace-orthogonality
        for word, m in zip(subsets[1:], basis[1:]):
            if m.trace_raw():
                raise DimensionMismatchError(f"monomial {list(word)} is not traceless")
        return Algebra(
            basis,
            name=f"CAR({self.sites.interval.label},r={self.sites.resolution})",
            words=subsets,
            coordinates=TraceCoordinates(GAUSS, inverses, n),
            presentation=CliffordPresentation(count),
            certify=False,
        )

    @property
    def ambient_dim(self) -> int:
        return 2 ** self.modes

    def generator_pair(self, site_index: int) -> Tuple[Matrix, Matrix]:
        return self.generators[2 * site_index], self.generators[2 * site_index + 1]

    @cached_property
    def generator_indices(self) -> List[int]:
        """Basis positions of the single-generator words."""
        index = self.algebra.word_index()
        return [index[(k,)] for k in range(len(self.generators))]

    def to_json(self) -> Dict[str, Any]:
        return {
            "sites": self.sites.to_json(),
            "generators": len(self.generators),
            "ambient_dim": self.ambient_dim,
            "dim": self.algebra.dim,
        }


CAR_CACHE_SIZE = 64


@lru_cache(maxsize=CAR_CACHE_SIZE)
def car_algebra_of(sites: SiteSet) -> CarAlgebra:
    return CarAlgebra(sites, site_cap=sites.count)


def quantize(interval: Interval, resolution: int, site_cap: int = DEFAULT_SITE_CAP) -> CarAlgebra:
    """CAR algebra of the interior sites of ``interval`` at ``resolution``; cached per site set."""
    sites = SiteSet(interval=interval, resolution=resolution)
    if sites.count > site_cap:
        raise SiteCapError(
            f"{sites.count} sites exceed the cap of {site_cap}",
            {"sites": sites.count, "cap": site_cap},
        )
    return car_algebra_of(sites)


def quantize_sites(sites: SiteSet, site_cap: int = DEFAULT_SITE_CAP) -> CarAlgebra:
    return quantize(sites.interval, sites.resolution, site_cap=site_cap)


def induced_hom(eps: Union[PLMap, SiteEmbedding], resolution: Optional[int] = None,
                site_cap: int = DEFAULT_SITE_CAP) -> AlgHom:
    """The Clifford functor on a site-compatible embedding.

    The generator pair at site s goes to the pair at eps(s). A PL embedding is
    restricted first; its target is quantized at the mesh of the source.
    """
    if isinstance(eps, PLMap):
        if resolution is None:
            raise SiteIncompatibleError("a PL embedding needs a resolution to be restricted to sites")
        eps = SiteEmbedding.from_pl(eps, resolution)
    source = quantize_sites(eps.source, site_cap)
    target = quantize_sites(eps.target, site_cap)
    images: List[Matrix] = []
    for j in eps.images:
        images.extend(target.generator_pair(j))
    return AlgHom.from_generator_images(
        source.algebra, target.algebra, images,
        name=f"Q({eps.source.interval.label}->{eps.target.interval.label})",
    )
