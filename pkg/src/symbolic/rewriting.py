"""
Hypothesis-directed proof search in the free setting.

A goal lhs = rhs is reduced to its balance word lhs rhs^-1, kept cyclically
reduced and in its least rotation (w = 1 iff every cyclic conjugate of w
is 1). A rewrite step rotates the word, replaces a prefix matching one side
of a hypothesis by the other side (optionally both inverted, optionally under
a common chain of homs) and freely reduces. The goal is Proven when the
balance word reaches the empty word.

States are explored shortest word first, bounded by the step depth and a
state budget, and the explored moves are kept in a networkx graph whose
shortest path to the empty word is the reported trace.
"""
from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
from pydantic import BaseModel, Field

from ..errors import ScriptError
from .expressions import (
    Expression,
    Letter,
    Word,
    apply_homs,
    free_reduce,
    invert_word,
    normalize,
    to_text,
    word_of,
    word_text,
)

logger = logging.getLogger(__name__)

DEFAULT_DEPTH = 8
DEFAULT_MAX_STATES = 20000

Bindings = Dict[str, Word]


class Direction(str, Enum):
    FORWARD = "->"
    BACKWARD = "<-"
    BOTH = "<->"


class ProofStatus(str, Enum):
    PROVEN = "proven"
    REFUTED = "refuted"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Hypothesis:
    label: str
    lhs: Expression
    rhs: Expression
    direction: Direction = Direction.FORWARD
    patterns: FrozenSet[str] = frozenset()

    def __str__(self) -> str:
        return f"{to_text(self.lhs)} = {to_text(self.rhs)}"


@dataclass(frozen=True)
class Rule:
    """One usable orientation of a hypothesis: pattern -> replacement."""

    label: str
    orientation: str
    inverted: bool
    pattern: Word
    replacement: Word

    @property
    def key(self) -> Tuple[str, str, bool]:
        return (self.label, self.orientation, self.inverted)


class ProofStep(BaseModel):
    rule: str = Field(description="Label of the hypothesis applied")
    orientation: str = Field(description="'forward' rewrites lhs to rhs, 'backward' rhs to lhs")
    inverted: bool = Field(default=False, description="Both sides of the hypothesis were inverted")
    prefix: List[str] = Field(default_factory=list, description="Homs applied around the hypothesis instance")
    rotation: int = Field(description="Cyclic rotation of the word before matching")
    bindings: Dict[str, str] = Field(default_factory=dict, description="Pattern variable instances")
    matched: str = Field(description="Text of the rewritten block")
    replacement: str = Field(description="Text it was replaced by")
    before: str
    after: str


class ProofResult(BaseModel):
    goal: str
    lhs: str
    rhs: str
    status: ProofStatus
    trace: List[ProofStep] = Field(default_factory=list)
    normal_forms: Optional[Dict[str, str]] = None
    states_explored: int = 0
    reason: Optional[str] = None
    replayed: Optional[bool] = None

    @property
    def proven(self) -> bool:
        return self.status == ProofStatus.PROVEN


# -- cyclic words -------------------------------------------------------------


def cyclic_reduce(w: Sequence[Letter]) -> Word:
    w = free_reduce(w)
    start, end = 0, len(w)
    while end - start >= 2 and w[start].cancels(w[end - 1]):
        start += 1
        end -= 1
    return w[start:end]


def canonical(w: Sequence[Letter]) -> Word:
    """Cyclically reduced and rotated to its least rotation."""
    w = cyclic_reduce(w)
    if not w:
        return ()
    return min(w[k:] + w[:k] for k in range(len(w)))


def balance_word(lhs: Expression, rhs: Expression) -> Word:
    return canonical(word_of(lhs) + invert_word(word_of(rhs)))


# -- matching -----------------------------------------------------------------


def _match(pattern: Word, pi: int, word: Word, wi: int, prefix: Tuple[str, ...],
           bindings: Bindings) -> Iterator[Tuple[int, Bindings]]:
    if pi == len(pattern):
        yield wi, bindings
        return
    p = pattern[pi]
    if not p.pattern:
        if wi < len(word) and word[wi] == p.under(prefix):
            yield from _match(pattern, pi + 1, word, wi + 1, prefix, bindings)
        return
    head = prefix + p.homs
    depth = len(head)
    if p.atom in bindings:
        value = bindings[p.atom]
        block = apply_homs(head, invert_word(value) if p.inverse else value)
        if word[wi:wi + len(block)] == block:
            yield from _match(pattern, pi + 1, word, wi + len(block), prefix, bindings)
        return
    for end in range(wi + 1, len(word) + 1):
        if word[end - 1].homs[:depth] != head:
            break
        stripped = tuple(letter.strip(depth) for letter in word[wi:end])
        value = invert_word(stripped) if p.inverse else stripped
        yield from _match(pattern, pi + 1, word, end, prefix, {**bindings, p.atom: value})


def _instantiate(replacement: Word, prefix: Tuple[str, ...], bindings: Bindings) -> Word:
    letters: List[Letter] = []
    for r in replacement:
        if not r.pattern:
            letters.append(r.under(prefix))
            continue
        block = apply_homs(prefix + r.homs, bindings[r.atom])
        letters.extend(invert_word(block) if r.inverse else block)
    return free_reduce(letters)


def _prefixes(letter: Letter) -> List[Tuple[str, ...]]:
    return [letter.homs[:k] for k in range(len(letter.homs) + 1)]


# -- the rewrite system -------------------------------------------------------


def _pattern_names(w: Word) -> FrozenSet[str]:
    return frozenset(letter.atom for letter in w if letter.pattern)


class RewriteSystem:
    """Hypotheses compiled into oriented rules, each also usable in inverted form."""

    def __init__(self, hypotheses: Sequence[Hypothesis] = ()):
        self.hypotheses = list(hypotheses)
        self.rules: List[Rule] = []
        for h in self.hypotheses:
            self.rules.extend(self._compile(h))
        logger.debug(f"rewrite system with {len(self.hypotheses)} hypotheses and {len(self.rules)} rules")

    @staticmethod
    def _compile(h: Hypothesis) -> List[Rule]:
        left, right = word_of(h.lhs, h.patterns), word_of(h.rhs, h.patterns)
        orientations = []
        if h.direction in (Direction.FORWARD, Direction.BOTH):
            orientations.append(("forward", left, right))
        if h.direction in (Direction.BACKWARD, Direction.BOTH):
            orientations.append(("backward", right, left))
        rules = []
        for name, pattern, replacement in orientations:
            if not pattern:
                raise ScriptError(f"hypothesis {h.label} cannot be applied {name}: its source side is 1",
                                  {"hypothesis": h.label})
            unbound = _pattern_names(replacement) - _pattern_names(pattern)
            if unbound:
                raise ScriptError(
                    f"hypothesis {h.label} applied {name} leaves {', '.join(sorted(unbound))} unbound",
                    {"hypothesis": h.label},
                )
            rules.append(Rule(h.label, name, False, pattern, replacement))
            rules.append(Rule(h.label, name, True, invert_word(pattern), invert_word(replacement)))
        return rules

    def symbols(self) -> FrozenSet[str]:
        names: set = set()
        for h in self.hypotheses:
            for w in (word_of(h.lhs, h.patterns), word_of(h.rhs, h.patterns)):
                for letter in w:
                    names.update(letter.homs)
                    if not letter.pattern:
                        names.add(letter.atom)
        return frozenset(names)

    def acts_on_anything(self) -> bool:
        """Some rule is a bare pattern that can match letters of any symbol."""
        return any(all(p.pattern and not p.homs for p in rule.pattern) for rule in self.rules)

    def cannot_act_on(self, w: Word) -> bool:
        if not self.rules:
            return True
        if self.acts_on_anything():
            return False
        goal = {letter.atom for letter in w} | {h for letter in w for h in letter.homs}
        return not (goal & self.symbols())

    def successors(self, w: Word, only: Optional[Tuple[str, str, bool]] = None) -> Iterator[Tuple[Move, Word]]:
        for rotation in range(len(w)):
            rotated = w[rotation:] + w[:rotation]
            for rule in self.rules:
                if only is not None and rule.key != only:
                    continue
                for prefix in _prefixes(rotated[0]):
                    for end, bindings in _match(rule.pattern, 0, rotated, 0, prefix, {}):
                        inserted = _instantiate(rule.replacement, prefix, bindings)
                        move = Move(rule, prefix, rotation, bindings, rotated[:end], inserted)
                        yield move, canonical(inserted + rotated[end:])


class Move(NamedTuple):
    rule: Rule
    prefix: Tuple[str, ...]
    rotation: int
    bindings: Bindings
    matched: Word
    inserted: Word

    def to_step(self, before: Word, after: Word) -> ProofStep:
        return ProofStep(
            rule=self.rule.label,
            orientation=self.rule.orientation,
            inverted=self.rule.inverted,
            prefix=list(self.prefix),
            rotation=self.rotation,
            bindings={name: word_text(value) for name, value in sorted(self.bindings.items())},
            matched=word_text(self.matched),
            replacement=word_text(self.inserted),
            before=word_text(before),
            after=word_text(after),
        )


# -- search -------------------------------------------------------------------


def prove_equal(lhs: Expression, rhs: Expression, system: Optional[RewriteSystem] = None,
                depth: int = DEFAULT_DEPTH, max_states: int = DEFAULT_MAX_STATES,
                goal: str = "goal") -> ProofResult:
    """Proven with a replayable trace, Refuted in a free factor, otherwise Unknown."""
    system = system or RewriteSystem()
    base = dict(goal=goal, lhs=to_text(lhs), rhs=to_text(rhs))
    root = balance_word(lhs, rhs)
    if not root:
        return ProofResult(**base, status=ProofStatus.PROVEN, states_explored=1)
    if system.cannot_act_on(root):
        forms = {"lhs": to_text(normalize(lhs)), "rhs": to_text(normalize(rhs))}
        logger.debug(f"{goal}: no hypothesis touches {word_text(root)}")
        return ProofResult(**base, status=ProofStatus.REFUTED, normal_forms=forms, states_explored=1)

    graph = nx.DiGraph()
    graph.add_node(root)
    seen: Dict[Word, int] = {root: 0}
    counter = itertools.count()
    queue = [(len(root), 0, next(counter), root)]
    reason = "depth bound"
    while queue:
        _, d, _, w = heapq.heappop(queue)
        if d >= depth:
            continue
        for move, nxt in system.successors(w):
            if not graph.has_edge(w, nxt):
                graph.add_edge(w, nxt, move=move)
            if nxt in seen:
                continue
            seen[nxt] = d + 1
            if not nxt:
                path = nx.shortest_path(graph, root, nxt)
                trace = [graph.edges[u, v]["move"].to_step(u, v) for u, v in zip(path, path[1:])]
                logger.debug(f"{goal}: proven in {len(trace)} steps after {len(seen)} states")
                return ProofResult(**base, status=ProofStatus.PROVEN, trace=trace, states_explored=len(seen))
            if len(seen) >= max_states:
                reason = "state budget"
                queue = []
                break
            heapq.heappush(queue, (len(nxt), d + 1, next(counter), nxt))
    logger.info(f"{goal}: unknown after {len(seen)} states ({reason})")
    return ProofResult(**base, status=ProofStatus.UNKNOWN, states_explored=len(seen), reason=reason)


def replay(lhs: Expression, rhs: Expression, system: RewriteSystem, trace: Sequence[ProofStep]) -> bool:
    """Re-apply every step from the balance word and demand the empty word at the end."""
    w = balance_word(lhs, rhs)
    for step in trace:
        if word_text(w) != step.before:
            return False
        only = (step.rule, step.orientation, step.inverted)
        for move, nxt in system.successors(w, only=only):
            if move.rotation == step.rotation and list(move.prefix) == step.prefix:
                candidate = move.to_step(w, nxt)
                if candidate.bindings == step.bindings and candidate.after == step.after:
                    w = nxt
                    break
        else:
            return False
    return not w
