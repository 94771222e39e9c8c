"""Interaction terms, signatures and positions.

Interactions are immutable binary trees.  The derived operators ``seq``,
``par``, ``loopW`` and ``loopP`` are not node kinds of their own: they are
built as :class:`Coreg` / :class:`LoopC` nodes with an empty or full
concurrent region.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Union


class InvalidPosition(LookupError):
    pass


class Kind(enum.Enum):
    EMIT = "!"
    RECEIVE = "?"


@dataclass(frozen=True)
class Action:
    lifeline: str
    kind: Kind
    message: str

    def __str__(self) -> str:
        return f"{self.lifeline}{self.kind.value}{self.message}"

    def __lt__(self, other):
        return (self.lifeline, self.kind.value, self.message) < (
            other.lifeline,
            other.kind.value,
            other.message,
        )


def emit(lifeline: str, message: str) -> Action:
    return Action(lifeline, Kind.EMIT, message)


def receive(lifeline: str, message: str) -> Action:
    return Action(lifeline, Kind.RECEIVE, message)


@dataclass(frozen=True)
class Signature:
    """Declared lifelines (L) and messages (M), in declaration order."""

    lifelines: tuple[str, ...]
    messages: tuple[str, ...]

    def __post_init__(self):
        for name, ids in (("lifeline", self.lifelines), ("message", self.messages)):
            seen = set()
            for x in ids:
                if not isinstance(x, str) or not x:
                    raise ValueError(f"invalid {name} identifier {x!r}")
                if x in seen:
                    raise ValueError(f"duplicate {name} identifier {x!r}")
                seen.add(x)

    @property
    def all_lifelines(self) -> frozenset[str]:
        return frozenset(self.lifelines)

    def check_action(self, a: Action) -> None:
        if a.lifeline not in self.lifelines:
            raise ValueError(f"undeclared lifeline {a.lifeline!r} in {a}")
        if a.message not in self.messages:
            raise ValueError(f"undeclared message {a.message!r} in {a}")


# ---------------------------------------------------------------------------
# terms


class _Term:
    __slots__ = ()

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(self._key()))

    def __hash__(self):
        return self._hash

    def _key(self):
        raise NotImplementedError


@dataclass(frozen=True, eq=True)
class Empty(_Term):
    _hash: int = field(init=False, repr=False, compare=False)

    def _key(self):
        return ("o",)

    def __str__(self):
        return "o"


@dataclass(frozen=True, eq=True)
class Act(_Term):
    action: Action
    _hash: int = field(init=False, repr=False, compare=False)

    def _key(self):
        return ("act", self.action)

    def __str__(self):
        return str(self.action)


@dataclass(frozen=True, eq=True)
class Strict(_Term):
    left: "Interaction"
    right: "Interaction"
    _hash: int = field(init=False, repr=False, compare=False)

    def _key(self):
        return ("strict", self.left, self.right)

    def __str__(self):
        return f"strict({self.left},{self.right})"


@dataclass(frozen=True, eq=True)
class Alt(_Term):
    left: "Interaction"
    right: "Interaction"
    _hash: int = field(init=False, repr=False, compare=False)

    def _key(self):
        return ("alt", self.left, self.right)

    def __str__(self):
        return f"alt({self.left},{self.right})"


@dataclass(frozen=True, eq=True)
class Coreg(_Term):
    region: frozenset
    left: "Interaction"
    right: "Interaction"
    _hash: int = field(init=False, repr=False, compare=False)

    def _key(self):
        return ("coreg", self.region, self.left, self.right)

    def __str__(self):
        return f"coreg({','.join(sorted(self.region))})({self.left},{self.right})"


@dataclass(frozen=True, eq=True)
class LoopS(_Term):
    child: "Interaction"
    _hash: int = field(init=False, repr=False, compare=False)

    def _key(self):
        return ("loopS", self.child)

    def __str__(self):
        return f"loopS({self.child})"


@dataclass(frozen=True, eq=True)
class LoopC(_Term):
    region: frozenset
    child: "Interaction"
    _hash: int = field(init=False, repr=False, compare=False)

    def _key(self):
        return ("loopC", self.region, self.child)

    def __str__(self):
        return f"loopC({','.join(sorted(self.region))})({self.child})"


for _cls in (Empty, Act, Strict, Alt, Coreg, LoopS, LoopC):
    _cls.__hash__ = _Term.__hash__
del _cls

Interaction = Union[Empty, Act, Strict, Alt, Coreg, LoopS, LoopC]
BINARY = (Strict, Alt, Coreg)
LOOPS = (LoopS, LoopC)

EMPTY = Empty()


def act(a: Action) -> Act:
    return Act(a)


def seq(left: Interaction, right: Interaction) -> Coreg:
    return Coreg(frozenset(), left, right)


def par(left: Interaction, right: Interaction, lifelines: Iterable[str]) -> Coreg:
    return Coreg(frozenset(lifelines), left, right)


def coreg(region: Iterable[str], left: Interaction, right: Interaction) -> Coreg:
    return Coreg(frozenset(region), left, right)


def loop_w(child: Interaction) -> LoopC:
    return LoopC(frozenset(), child)


def loop_p(child: Interaction, lifelines: Iterable[str]) -> LoopC:
    return LoopC(frozenset(lifelines), child)


def loop_c(region: Iterable[str], child: Interaction) -> LoopC:
    return LoopC(frozenset(region), child)


def message_passing(sender: str, message: str, *receivers: str) -> Interaction:
    """``sender -- message -> (receivers...)``: the emission strictly before
    the weakly sequenced receptions, in the order given."""
    out = Act(emit(sender, message))
    if not receivers:
        return out
    recs = [Act(receive(r, message)) for r in receivers]
    chain = recs[-1]
    for r in reversed(recs[:-1]):
        chain = seq(r, chain)
    return Strict(out, chain)


def nary(make, items):
    """Right-nest ``items`` with the binary constructor ``make``."""
    items = list(items)
    if not items:
        raise ValueError("n-ary operator needs at least one operand")
    acc = items[-1]
    for x in reversed(items[:-1]):
        acc = make(x, acc)
    return acc


# ---------------------------------------------------------------------------
# positions

Position = tuple  # tuple of 1/2, () is the root


def format_position(p: Position) -> str:
    return "".join(str(d) for d in p) if p else "ε"


def parse_position(text: str) -> Position:
    if text in ("", "ε", "e"):
        return ()
    if any(c not in "12" for c in text):
        raise ValueError(f"invalid position {text!r}")
    return tuple(int(c) for c in text)


def children(i: Interaction) -> tuple:
    if isinstance(i, BINARY):
        return (i.left, i.right)
    if isinstance(i, LOOPS):
        return (i.child,)
    return ()


def iter_positions(i: Interaction, prefix: Position = ()) -> Iterator[tuple[Position, Interaction]]:
    """Pre-order walk yielding ``(position, sub-interaction)`` pairs."""
    stack = [(prefix, i)]
    while stack:
        p, t = stack.pop()
        yield p, t
        kids = children(t)
        for d in range(len(kids), 0, -1):
            stack.append((p + (d,), kids[d - 1]))


def positions_of(i: Interaction) -> set:
    return {p for p, _ in iter_positions(i)}


def sub_at(i: Interaction, p: Position) -> Interaction:
    t = i
    for d in p:
        kids = children(t)
        if d not in (1, 2) or d > len(kids):
            raise InvalidPosition(f"position {format_position(p)} is not in the interaction")
        t = kids[d - 1]
    return t


@lru_cache(maxsize=1 << 16)
def loop_depth_at(i: Interaction, p: Position) -> int:
    """Number of loop nodes strictly above position ``p``."""
    depth = 0
    t = i
    for d in p:
        kids = children(t)
        if d not in (1, 2) or d > len(kids):
            raise InvalidPosition(f"position {format_position(p)} is not in the interaction")
        if isinstance(t, LOOPS):
            depth += 1
        t = kids[d - 1]
    return depth


@lru_cache(maxsize=1 << 16)
def max_loop_depth(i: Interaction) -> int:
    if isinstance(i, LOOPS):
        return 1 + max_loop_depth(i.child)
    if isinstance(i, BINARY):
        return max(max_loop_depth(i.left), max_loop_depth(i.right))
    return 0


@lru_cache(maxsize=1 << 16)
def actions_outside_loops(i: Interaction) -> int:
    if isinstance(i, Act):
        return 1
    if isinstance(i, Alt):
        return max(actions_outside_loops(i.left), actions_outside_loops(i.right))
    if isinstance(i, (Strict, Coreg)):
        return actions_outside_loops(i.left) + actions_outside_loops(i.right)
    return 0


def total_action_count(i: Interaction) -> int:
    return sum(1 for _, t in iter_positions(i) if isinstance(t, Act))


@lru_cache(maxsize=1 << 16)
def loop_count(i: Interaction) -> int:
    return sum(1 for _, t in iter_positions(i) if isinstance(t, LOOPS))


def term_size(i: Interaction) -> int:
    return sum(1 for _ in iter_positions(i))


def actions_of(i: Interaction) -> set:
    return {t.action for _, t in iter_positions(i) if isinstance(t, Act)}


def lifelines_of(i: Interaction) -> set:
    """Lifelines mentioned by actions or concurrent regions."""
    out = set()
    for _, t in iter_positions(i):
        if isinstance(t, Act):
            out.add(t.action.lifeline)
        elif isinstance(t, (Coreg, LoopC)):
            out |= t.region
    return out


def check_interaction(i: Interaction, sig: Signature) -> None:
    """Raise ``ValueError`` when ``i`` mentions an undeclared identifier."""
    for _, t in iter_positions(i):
        if isinstance(t, Act):
            sig.check_action(t.action)
        elif isinstance(t, (Coreg, LoopC)):
            extra = t.region - sig.all_lifelines
            if extra:
                raise ValueError(f"undeclared lifeline(s) {sorted(extra)} in region")
