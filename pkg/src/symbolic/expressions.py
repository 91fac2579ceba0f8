"""
Noncommutative expressions over symbols, unit inverses and hom applications.

Expressions are immutable trees of ``Atom``, ``Inverse``, ``Product`` and
``HomApp``. The smart constructors keep products flat, drop the unit ``1``
and cancel double inverses, so trees built through them are canonical.

Underneath the trees sits the letter layer used by the rewrite engine: a
``Letter`` is an atom with the chain of homs applied to it and an exponent
sign, and a word is a tuple of letters. ``normalize`` pushes homs and
inverses down to the atoms and freely reduces the resulting word.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Tuple, Union

UNIT_SYMBOL = "1"


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Inverse:
    body: "Expression"

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Product:
    factors: Tuple["Expression", ...]

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class HomApp:
    hom: str
    arg: "Expression"

    def __str__(self) -> str:
        return to_text(self)


Expression = Union[Atom, Inverse, Product, HomApp]

ONE = Atom(UNIT_SYMBOL)


def is_one(e: Expression) -> bool:
    return e == ONE


def atom(name: str) -> Atom:
    return Atom(name)


def inverse(e: Expression) -> Expression:
    if is_one(e):
        return ONE
    if isinstance(e, Inverse):
        return e.body
    return Inverse(e)


def product(*factors: Expression) -> Expression:
    """Flatten nested products and drop units; an empty product is ``1``."""
    flat: List[Expression] = []
    for f in factors:
        if isinstance(f, Product):
            flat.extend(f.factors)
        elif not is_one(f):
            flat.append(f)
    if not flat:
        return ONE
    if len(flat) == 1:
        return flat[0]
    return Product(tuple(flat))


def hom_app(hom: str, arg: Expression) -> Expression:
    return HomApp(hom, arg)


def conjugate(u: Expression, x: Expression) -> Expression:
    """sigma_u(x) = u^-1 x u."""
    return product(inverse(u), x, u)


def transport(u: Expression, x: Expression) -> Expression:
    """tr_u(x) = u x u^-1."""
    return product(u, x, inverse(u))


# -- printing -----------------------------------------------------------------


def to_text(e: Expression) -> str:
    """Render ``e`` in the surface syntax accepted by ``parse``."""
    if isinstance(e, Atom):
        return e.name
    if isinstance(e, Inverse):
        if isinstance(e.body, (Atom, HomApp)):
            return f"{to_text(e.body)}^-1"
        return f"({to_text(e.body)})^-1"
    if isinstance(e, Product):
        return " ".join(f"({to_text(f)})" if isinstance(f, Product) else to_text(f) for f in e.factors)
    return f"{e.hom}({to_text(e.arg)})"


# -- letters and words --------------------------------------------------------


@dataclass(frozen=True, order=True)
class Letter:
    """``homs[0](homs[1](...(atom)))`` raised to the power -1 when ``inverse``.

    ``pattern`` marks a pattern variable that stands for a block of letters.
    """

    homs: Tuple[str, ...]
    atom: str
    inverse: bool = False
    pattern: bool = False

    def inverted(self) -> "Letter":
        return Letter(self.homs, self.atom, not self.inverse, self.pattern)

    def under(self, prefix: Tuple[str, ...]) -> "Letter":
        return Letter(prefix + self.homs, self.atom, self.inverse, self.pattern)

    def strip(self, depth: int) -> "Letter":
        return Letter(self.homs[depth:], self.atom, self.inverse, self.pattern)

    def cancels(self, other: "Letter") -> bool:
        return (self.homs == other.homs and self.atom == other.atom
                and self.pattern == other.pattern and self.inverse != other.inverse)

    def to_expression(self) -> Expression:
        e: Expression = Atom(self.atom)
        for h in reversed(self.homs):
            e = HomApp(h, e)
        return Inverse(e) if self.inverse else e


Word = Tuple[Letter, ...]


def free_reduce(letters: Iterable[Letter]) -> Word:
    stack: List[Letter] = []
    for letter in letters:
        if stack and stack[-1].cancels(letter):
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def invert_word(w: Word) -> Word:
    return tuple(letter.inverted() for letter in reversed(w))


def apply_homs(prefix: Tuple[str, ...], w: Word) -> Word:
    return tuple(letter.under(prefix) for letter in w)


def word_of(e: Expression, patterns: FrozenSet[str] = frozenset(),
            homs: Tuple[str, ...] = ()) -> Word:
    """The freely reduced letter word of ``e`` with ``homs`` applied on the outside."""
    if isinstance(e, Atom):
        if is_one(e):
            return ()
        return (Letter(homs, e.name, False, e.name in patterns),)
    if isinstance(e, Inverse):
        return invert_word(word_of(e.body, patterns, homs))
    if isinstance(e, Product):
        letters: List[Letter] = []
        for f in e.factors:
            letters.extend(word_of(f, patterns, homs))
        return free_reduce(letters)
    return word_of(e.arg, patterns, homs + (e.hom,))


def expression_of(w: Word) -> Expression:
    return product(*(letter.to_expression() for letter in w))


def word_text(w: Word) -> str:
    return to_text(expression_of(w))


def normalize(e: Expression) -> Expression:
    """Homs and inverses pushed to atoms, products flattened, units and cancelling pairs dropped."""
    return expression_of(word_of(e))


def atoms_of(e: Expression) -> FrozenSet[str]:
    if isinstance(e, Atom):
        return frozenset() if is_one(e) else frozenset({e.name})
    if isinstance(e, Inverse):
        return atoms_of(e.body)
    if isinstance(e, Product):
        return frozenset().union(*(atoms_of(f) for f in e.factors))
    return atoms_of(e.arg)


def homs_of(e: Expression) -> FrozenSet[str]:
    if isinstance(e, Atom):
        return frozenset()
    if isinstance(e, Inverse):
        return homs_of(e.body)
    if isinstance(e, Product):
        return frozenset().union(*(homs_of(f) for f in e.factors))
    return frozenset({e.hom}) | homs_of(e.arg)


def inverted_atoms(e: Expression, inside: bool = False) -> FrozenSet[str]:
    """Atoms that occur under an inverse somewhere in ``e``."""
    if isinstance(e, Atom):
        return frozenset({e.name}) if inside and not is_one(e) else frozenset()
    if isinstance(e, Inverse):
        return inverted_atoms(e.body, True)
    if isinstance(e, Product):
        return frozenset().union(*(inverted_atoms(f, inside) for f in e.factors))
    return inverted_atoms(e.arg, inside)
