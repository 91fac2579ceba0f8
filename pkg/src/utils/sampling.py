"""
Seeded random instances for the property sweeps.

Every sampler takes an explicit ``random.Random`` so a suite seeded once
produces the same instances on every run.
"""
import logging
import random
from fractions import Fraction
from typing import List, Optional, Tuple

from ..algebra import Algebra, AlgHom, conjugation_hom, full_matrix_algebra, random_unit, twist
from ..groupoid import TwoCell, check_two_cell
from ..interval import InteriorDiffeo, Interval, PLMap, check_interval_two_cell, pl_compose
from ..interval.cells import IntervalTwoCell
from ..kernel import GAUSS, Matrix, ScalarField
from ..quantization import DiscreteCell, SiteEmbedding, SitePermutation, SiteSet, check_discrete_cell

logger = logging.getLogger(__name__)


# -- rationals and intervals ---------------------------------------------------------


def rational_between(lo: Fraction, hi: Fraction, rng: random.Random, max_denominator: int = 8) -> Fraction:
    """A rational strictly between lo and hi."""
    d = rng.randint(2, max_denominator)
    return lo + (hi - lo) * Fraction(rng.randint(1, d - 1), d)


def increasing_points(lo: Fraction, hi: Fraction, count: int, rng: random.Random) -> List[Fraction]:
    """``count`` distinct rationals strictly between lo and hi, sorted."""
    points: set = set()
    while len(points) < count:
        points.add(rational_between(lo, hi, rng))
    return sorted(points)


def random_interval(rng: random.Random, label: str = "I") -> Interval:
    left = rng.randint(-2, 2)
    length = Fraction(rng.randint(1, 4), rng.choice((1, 2)))
    return Interval(left=left, right=left + length, label=label)


def interval_chain(rng: random.Random, count: int) -> List[Interval]:
    labels = "IJKLMN"
    return [random_interval(rng, labels[k % len(labels)]) for k in range(count)]


# -- PL maps ---------------------------------------------------------------------------


def random_diffeo(interval: Interval, rng: random.Random, max_breakpoints: int = 3) -> InteriorDiffeo:
    """A collared PL interior diffeomorphism, sometimes the identity."""
    if rng.random() < 0.1:
        return InteriorDiffeo.identity(interval)
    width = interval.length / rng.randint(4, 8)
    lo, hi = interval.left + width, interval.right - width
    count = rng.randint(1, max_breakpoints)
    xs = increasing_points(lo, hi, count, rng)
    ys = increasing_points(lo, hi, count, rng)
    points = [(interval.left, interval.left), (lo, lo), *zip(xs, ys), (hi, hi), (interval.right, interval.right)]
    return InteriorDiffeo(pl=PLMap.from_points(interval, interval, points), collar=width)


def random_embedding(domain: Interval, codomain: Interval, rng: random.Random,
                     max_breakpoints: int = 3) -> PLMap:
    """An increasing PL map I -> J; each end of the image sometimes touches the end of J."""
    middle = (codomain.left + codomain.right) / 2
    p = codomain.left if rng.random() < 0.5 else rational_between(codomain.left, middle, rng)
    q = codomain.right if rng.random() < 0.5 else rational_between(middle, codomain.right, rng)
    count = rng.randint(0, max_breakpoints)
    xs = increasing_points(domain.left, domain.right, count, rng)
    ys = increasing_points(p, q, count, rng)
    points = [(domain.left, p), *zip(xs, ys), (domain.right, q)]
    return PLMap.from_points(domain, codomain, points)


def random_self_map(interval: Interval, rng: random.Random, max_breakpoints: int = 3) -> PLMap:
    """An endpoint-fixing PL self-map; about a third are collared, hence in the identity component."""
    if rng.random() < 1 / 3:
        return random_diffeo(interval, rng, max_breakpoints).pl
    count = rng.randint(1, max_breakpoints)
    xs = increasing_points(interval.left, interval.right, count, rng)
    ys = increasing_points(interval.left, interval.right, count, rng)
    points = [(interval.left, interval.left), *zip(xs, ys), (interval.right, interval.right)]
    return PLMap.from_points(interval, interval, points)


def random_interval_cell(domain: Interval, codomain: Interval, rng: random.Random) -> IntervalTwoCell:
    """(a, b): eps0 -> b o eps0 o a^-1, certified."""
    eps0 = random_embedding(domain, codomain, rng)
    a = random_diffeo(domain, rng)
    b = random_diffeo(codomain, rng)
    eps1 = pl_compose(pl_compose(b.pl, eps0), a.inverse().pl)
    return check_interval_two_cell(eps0, eps1, a, b)


def random_lorentz_parameter(rng: random.Random, nonzero: bool = True) -> Fraction:
    while True:
        d = rng.randint(2, 9)
        u = Fraction(rng.randint(-(d - 1), d - 1), d)
        if u or not nonzero:
            return u


# -- algebra ---------------------------------------------------------------------------


def matrix_algebra(n: int, field: ScalarField) -> Algebra:
    return full_matrix_algebra(n, field, name=f"Mat{n}({field.descriptor})")


def random_automorphism(algebra: Algebra, rng: random.Random, name: str = "phi", height: int = 3) -> AlgHom:
    return conjugation_hom(algebra, random_unit(algebra, rng, height), name=name)


def random_cell(phi0: AlgHom, rng: random.Random, name: Optional[str] = None, height: int = 3) -> TwoCell:
    """A certified (a, b): phi0 -> sigma_b o phi0 o sigma_a^-1 for random units a, b."""
    a = random_unit(phi0.source, rng, height)
    b = random_unit(phi0.target, rng, height)
    inner = conjugation_hom(phi0.source, a.invert(), certify=False)
    phi1 = twist(phi0.compose(inner), b, name=name or f"{phi0.name}'")
    return check_two_cell(phi0, phi1, a, b)


def random_cell_chain(algebra: Algebra, length: int, rng: random.Random, height: int = 3) -> List[TwoCell]:
    """``length`` horizontally composable cells, each between inner automorphisms of ``algebra``."""
    cells = []
    for k in range(length):
        phi = random_automorphism(algebra, rng, name=f"phi{k}", height=height)
        cells.append(random_cell(phi, rng, name=f"phi{k}'", height=height))
    return cells


def diagonal_algebra(field: ScalarField) -> Algebra:
    """span(e11, e22) inside Mat2."""
    return Algebra([Matrix.unit(2, 0, 0, field), Matrix.unit(2, 1, 1, field)], name=f"D2({field.descriptor})")


def idempotent_hom(source: Algebra, target: Algebra, p: Matrix, name: str) -> AlgHom:
    """The hom of the diagonal algebra sending e11 to the idempotent p and e22 to 1 - p."""
    one = Matrix.identity(target.ambient_dim, target.field)
    return AlgHom(source, target, [p, one - p], name=name)


def random_idempotent(target: Algebra, rank: int, rng: random.Random) -> Matrix:
    field = target.field
    if rank == 0:
        return Matrix.zeros(2, 2, field)
    if rank == 2:
        return Matrix.identity(2, field)
    v = random_unit(target, rng)
    return v.inverse_matrix @ Matrix.unit(2, 0, 0, field) @ v.matrix


def random_pi0_pair(source: Algebra, target: Algebra, rng: random.Random) -> Tuple[AlgHom, AlgHom]:
    """Two homs D2 -> Mat2 given by idempotents; conjugate exactly when the ranks agree."""
    if rng.random() < 0.5:
        r0 = r1 = 1
    else:
        r0, r1 = rng.randint(0, 2), rng.randint(0, 2)
    return (idempotent_hom(source, target, random_idempotent(target, r0, rng), f"p{r0}"),
            idempotent_hom(source, target, random_idempotent(target, r1, rng), f"q{r1}"))


# -- states ----------------------------------------------------------------------------


def random_density(n: int, rng: random.Random, height: int = 2) -> Matrix:
    """(M M* + 1) / trace for a random M over Q(i): positive definite with rational diagonal."""
    m = Matrix.random(n, GAUSS, rng, height)
    rho = m @ m.conjugate_transpose() + Matrix.identity(n, GAUSS)
    return rho.scale(GAUSS.inv(rho.trace_raw()))


def random_gauss_matrix(n: int, rng: random.Random, height: int = 2) -> Matrix:
    return Matrix.random(n, GAUSS, rng, height)


# -- sites -----------------------------------------------------------------------------


def random_permutation(sites: SiteSet, rng: random.Random) -> SitePermutation:
    images = list(range(sites.count))
    rng.shuffle(images)
    return SitePermutation(sites=sites, images=tuple(images))


def random_injection(source: SiteSet, target: SiteSet, rng: random.Random) -> SiteEmbedding:
    return SiteEmbedding(source=source, target=target, images=tuple(rng.sample(range(target.count), source.count)))


def random_discrete_cell(source: SiteSet, target: SiteSet, rng: random.Random) -> DiscreteCell:
    """(a, b): eps0 -> b o eps0 o a^-1 on sites."""
    eps0 = random_injection(source, target, rng)
    a = random_permutation(source, rng)
    b = random_permutation(target, rng)
    return check_discrete_cell(eps0, eps0.after(a.inverse()).then(b), a, b)


def random_site_diffeo(sites: SiteSet, rng: random.Random) -> InteriorDiffeo:
    """A PL interior diffeomorphism supported inside one lattice cell, so it fixes every site."""
    interval, h = sites.interval, sites.mesh
    k = rng.randrange(sites.resolution)
    lo = interval.left + k * h + h / 4
    hi = interval.left + (k + 1) * h - h / 4
    x, y = rational_between(lo, hi, rng), rational_between(lo, hi, rng)
    points = [(interval.left, interval.left), (lo, lo), (x, y), (hi, hi), (interval.right, interval.right)]
    return InteriorDiffeo.from_map(PLMap.from_points(interval, interval, points))


def random_site_compatible_cell(resolution: int, extra: int, rng: random.Random, start: int = 0,
                                labels: Tuple[str, str] = ("I", "J")) -> IntervalTwoCell:
    """A certified interval cell I -> J whose maps all send sites to sites at mesh 1/r.

    I = [0, (r + start)/r] and J = [0, (r + start + extra)/r].
    """
    h = Fraction(1, resolution)
    I = Interval(left=0, right=(resolution + start) * h, label=labels[0])
    J = Interval(left=0, right=(resolution + start + extra) * h, label=labels[1])
    shift = rng.randint(0, extra) * h
    eps0 = PLMap.affine(I, J, 1, shift)
    a = random_site_diffeo(SiteSet(interval=I, resolution=resolution + start), rng)
    b = random_site_diffeo(SiteSet(interval=J, resolution=resolution + start + extra), rng)
    eps1 = pl_compose(pl_compose(b.pl, eps0), a.inverse().pl)
    return check_interval_two_cell(eps0, eps1, a, b)
