"""Traces, co-localizations and multi-traces.

A multi-trace holds one local trace per co-localization of a partition of
the lifelines.  Local traces are plain tuples of :class:`~orv.ir.Action`.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .ir import Action, Kind, Signature

Trace = tuple  # tuple[Action, ...]


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    """Ordered collection of disjoint, non-empty lifeline sets."""

    colocs: tuple[frozenset, ...]

    def __post_init__(self):
        seen: set = set()
        for c in self.colocs:
            if not c:
                raise PartitionError("co-localizations must be non-empty")
            if seen & c:
                raise PartitionError(f"overlapping co-localizations on {sorted(seen & c)}")
            seen |= c
        object.__setattr__(self, "_index", {l: k for k, c in enumerate(self.colocs) for l in c})

    @classmethod
    def of(cls, *groups: Iterable[str]) -> "Partition":
        return cls(tuple(frozenset(g) for g in groups))

    @classmethod
    def trivial(cls, lifelines: Iterable[str]) -> "Partition":
        return cls((frozenset(lifelines),))

    @classmethod
    def discrete(cls, lifelines: Iterable[str]) -> "Partition":
        return cls(tuple(frozenset([l]) for l in lifelines))

    @property
    def lifelines(self) -> frozenset:
        return frozenset(self._index)

    def __len__(self):
        return len(self.colocs)

    def index_of(self, lifeline: str) -> int:
        try:
            return self._index[lifeline]
        except KeyError:
            raise PartitionError(f"lifeline {lifeline!r} is in no co-localization") from None

    def coloc_of(self, a: Action) -> frozenset:
        return self.colocs[self.index_of(a.lifeline)]

    def covers(self, sig: Signature) -> bool:
        return self.lifelines == sig.all_lifelines

    def refines(self, coarse: "Partition") -> bool:
        """True when every co-localization here lies inside one of ``coarse``."""
        return all(any(c <= d for d in coarse.colocs) for c in self.colocs)

    def same_groups(self, other: "Partition") -> bool:
        return set(self.colocs) == set(other.colocs)

    def __str__(self):
        return "{" + ",".join("(" + ",".join(sorted(c)) + ")" for c in self.colocs) + "}"


def format_trace(t: Trace) -> str:
    return ".".join(str(a) for a in t) if t else "ε"


@dataclass(frozen=True)
class MultiTrace:
    partition: Partition
    components: tuple  # tuple[Trace, ...], aligned with partition.colocs

    def __post_init__(self):
        if len(self.components) != len(self.partition.colocs):
            raise PartitionError("one component per co-localization is required")
        for c, t in zip(self.partition.colocs, self.components):
            for a in t:
                if a.lifeline not in c:
                    raise PartitionError(f"action {a} lies outside co-localization {sorted(c)}")

    @classmethod
    def empty(cls, partition: Partition) -> "MultiTrace":
        return cls(partition, tuple(() for _ in partition.colocs))

    @classmethod
    def from_global(cls, t: Iterable[Action], partition: Partition) -> "MultiTrace":
        comps: list[list] = [[] for _ in partition.colocs]
        for a in t:
            comps[partition.index_of(a.lifeline)].append(a)
        return cls(partition, tuple(tuple(c) for c in comps))

    def __len__(self) -> int:
        return sum(len(t) for t in self.components)

    @property
    def is_empty(self) -> bool:
        return all(not t for t in self.components)

    def component(self, coloc: frozenset) -> Trace:
        return self.components[self.partition.colocs.index(frozenset(coloc))]

    def with_component(self, k: int, t: Trace) -> "MultiTrace":
        comps = list(self.components)
        comps[k] = tuple(t)
        return MultiTrace(self.partition, tuple(comps))

    def prepend(self, a: Action) -> "MultiTrace":
        k = self.partition.index_of(a.lifeline)
        return self.with_component(k, (a,) + self.components[k])

    def tail(self, k: int) -> "MultiTrace":
        """Drop the head of component ``k``."""
        return self.with_component(k, self.components[k][1:])

    def project(self, fine: Partition) -> "MultiTrace":
        if not fine.refines(self.partition) or fine.lifelines != self.partition.lifelines:
            raise PartitionError(f"{fine} is not a refinement of {self.partition}")
        comps: list[list] = [[] for _ in fine.colocs]
        for t in self.components:
            for a in t:
                comps[fine.index_of(a.lifeline)].append(a)
        return MultiTrace(fine, tuple(tuple(c) for c in comps))

    def actions(self) -> list:
        return [a for t in self.components for a in t]

    def __str__(self):
        return "; ".join(
            f"[{','.join(sorted(c))}] {format_trace(t)}"
            for c, t in zip(self.partition.colocs, self.components)
        )


def coloc_of(a: Action, partition: Partition) -> frozenset:
    return partition.coloc_of(a)


def prepend(a: Action, mu: MultiTrace) -> MultiTrace:
    return mu.prepend(a)


def project(mu: MultiTrace, fine: Partition) -> MultiTrace:
    return mu.project(fine)


# ---------------------------------------------------------------------------
# slices


def trace_slices(t: Sequence) -> set:
    """All contiguous sub-words of ``t``, the empty word included."""
    t = tuple(t)
    out = {()}
    for i in range(len(t)):
        for j in range(i + 1, len(t) + 1):
            out.add(t[i:j])
    return out


def is_subword(small: Sequence, big: Sequence) -> bool:
    small, big = tuple(small), tuple(big)
    n = len(small)
    if n == 0:
        return True
    return any(big[i:i + n] == small for i in range(len(big) - n + 1))


def slices_of(mu: MultiTrace) -> set:
    per = [sorted(trace_slices(t), key=lambda s: (len(s), s)) for t in mu.components]
    return {MultiTrace(mu.partition, tuple(combo)) for combo in product(*per)}


def is_slice(sub: MultiTrace, mu: MultiTrace) -> bool:
    if sub.partition != mu.partition:
        raise PartitionError("slice check needs identical partitions")
    return all(is_subword(s, t) for s, t in zip(sub.components, mu.components))


def random_wide_slice(mu: MultiTrace, rng: random.Random, min_fraction: float = 1 / 3) -> MultiTrace:
    """A random slice whose components keep at least ``min_fraction`` of
    their original length (rounded up)."""
    comps = []
    for t in mu.components:
        n = len(t)
        keep_min = min(n, math.ceil(n * min_fraction))
        length = rng.randint(keep_min, n) if n else 0
        start = rng.randint(0, n - length)
        comps.append(tuple(t[start:start + length]))
    return MultiTrace(mu.partition, tuple(comps))


# ---------------------------------------------------------------------------
# mutants


class MutationError(ValueError):
    pass


def mutate_swap_actions(mu: MultiTrace, rng: random.Random) -> MultiTrace:
    """Exchange two actions inside one component."""
    candidates = [k for k, t in enumerate(mu.components) if len(t) >= 2]
    if not candidates:
        raise MutationError("no component has two actions to swap")
    k = rng.choice(candidates)
    t = list(mu.components[k])
    x, y = rng.sample(range(len(t)), 2)
    t[x], t[y] = t[y], t[x]
    return mu.with_component(k, tuple(t))


def mutate_swap_components(mu1: MultiTrace, mu2: MultiTrace, coloc) -> MultiTrace:
    """``mu1`` with its ``coloc`` component taken from ``mu2``."""
    if mu1.partition != mu2.partition:
        raise PartitionError("component swap needs identical partitions")
    k = mu1.partition.colocs.index(frozenset(coloc))
    return mu1.with_component(k, mu2.components[k])


def mutate_insert_action(mu: MultiTrace, rng: random.Random, sig: Signature) -> MultiTrace:
    """Insert one random well-typed action at a random place."""
    k = rng.randrange(len(mu.partition.colocs))
    lifeline = rng.choice(sorted(mu.partition.colocs[k]))
    if not sig.messages:
        raise MutationError("signature declares no message")
    a = Action(lifeline, rng.choice([Kind.EMIT, Kind.RECEIVE]), rng.choice(sig.messages))
    t = list(mu.components[k])
    t.insert(rng.randint(0, len(t)), a)
    return mu.with_component(k, tuple(t))


# ---------------------------------------------------------------------------
# observation flags

Flags = tuple  # tuple[bool, ...] aligned with partition.colocs


def no_flags(partition: Partition) -> Flags:
    return tuple(False for _ in partition.colocs)


def flag_started(flags: Flags, k: int) -> Flags:
    if flags[k]:
        return flags
    return flags[:k] + (True,) + flags[k + 1:]
