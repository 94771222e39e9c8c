"""Operational semantics: pruning, execution and execution-tree exploration."""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple, Optional

from .ir import (
    EMPTY,
    LOOPS,
    Act,
    Action,
    Alt,
    Coreg,
    Empty,
    Interaction,
    Kind,
    LoopC,
    LoopS,
    Position,
    Strict,
    children,
    format_position,
    loop_count,
    loop_depth_at,
)
from .traces import MultiTrace, Partition

log = logging.getLogger(__name__)


class NotExecutable(LookupError):
    pass


# ---------------------------------------------------------------------------
# pruning


def prune(i: Interaction, avoid: frozenset) -> Optional[Interaction]:
    """Remove every behavior of ``i`` that touches a lifeline of ``avoid``.

    Returns ``None`` when no behavior of ``i`` avoids those lifelines.
    """
    return _prune(i, frozenset(avoid))


@lru_cache(maxsize=1 << 16)
def _prune(i, avoid):
    if not avoid:
        return i
    if isinstance(i, Empty):
        return i
    if isinstance(i, Act):
        return None if i.action.lifeline in avoid else i
    if isinstance(i, Alt):
        left, right = _prune(i.left, avoid), _prune(i.right, avoid)
        if left is None:
            return right
        if right is None:
            return left
        if left is i.left and right is i.right:
            return i
        return Alt(left, right)
    if isinstance(i, (Strict, Coreg)):
        left = _prune(i.left, avoid)
        if left is None:
            return None
        right = _prune(i.right, avoid)
        if right is None:
            return None
        if left is i.left and right is i.right:
            return i
        if isinstance(i, Strict):
            return Strict(left, right)
        return Coreg(i.region, left, right)
    if isinstance(i, LOOPS):
        child = _prune(i.child, avoid)
        if child is None:
            return EMPTY
        if child is i.child:
            return i
        return LoopS(child) if isinstance(i, LoopS) else LoopC(i.region, child)
    raise TypeError(f"not an interaction: {i!r}")


@lru_cache(maxsize=1 << 16)
def accepts_empty(i: Interaction) -> bool:
    """Whether ``i`` accepts the empty multi-trace (i.e. prunes w.r.t. all lifelines)."""
    if isinstance(i, Act):
        return False
    if isinstance(i, Alt):
        return accepts_empty(i.left) or accepts_empty(i.right)
    if isinstance(i, (Strict, Coreg)):
        return accepts_empty(i.left) and accepts_empty(i.right)
    return True


# ---------------------------------------------------------------------------
# execution


class FrontierEntry(NamedTuple):
    action: Action
    position: Position
    follow_up: Interaction

    def __str__(self):
        return f"{self.action}@{format_position(self.position)}"


def frontier(i: Interaction) -> list:
    """All ``(a, p, i')`` with ``i -a@p-> i'``, ordered by position."""
    return list(_frontier(i))


@lru_cache(maxsize=1 << 16)
def _frontier(i):
    if isinstance(i, Empty):
        return ()
    if isinstance(i, Act):
        return (FrontierEntry(i.action, (), EMPTY),)
    out = []
    if isinstance(i, Alt):
        for a, p, f in _frontier(i.left):
            out.append(FrontierEntry(a, (1,) + p, f))
        for a, p, f in _frontier(i.right):
            out.append(FrontierEntry(a, (2,) + p, f))
    elif isinstance(i, Strict):
        for a, p, f in _frontier(i.left):
            out.append(FrontierEntry(a, (1,) + p, Strict(f, i.right)))
        if accepts_empty(i.left):
            for a, p, f in _frontier(i.right):
                out.append(FrontierEntry(a, (2,) + p, f))
    elif isinstance(i, Coreg):
        for a, p, f in _frontier(i.left):
            out.append(FrontierEntry(a, (1,) + p, Coreg(i.region, f, i.right)))
        for a, p, f in _frontier(i.right):
            avoid = frozenset((a.lifeline,)) - i.region
            left = _prune(i.left, avoid)
            if left is not None:
                out.append(FrontierEntry(a, (2,) + p, Coreg(i.region, left, f)))
    elif isinstance(i, LoopS):
        for a, p, f in _frontier(i.child):
            out.append(FrontierEntry(a, (1,) + p, Strict(f, i)))
    elif isinstance(i, LoopC):
        for a, p, f in _frontier(i.child):
            before = _prune(i, frozenset((a.lifeline,)) - i.region)
            # a loop always prunes (possibly to the empty interaction)
            out.append(FrontierEntry(a, (1,) + p, Coreg(i.region, before, Coreg(i.region, f, i))))
    else:
        raise TypeError(f"not an interaction: {i!r}")
    return tuple(out)


def execute(i: Interaction, p: Position) -> tuple:
    for a, q, f in _frontier(i):
        if q == tuple(p):
            return a, f
    raise NotExecutable(f"no action executable at position {format_position(tuple(p))}")


def membership(i: Interaction, mu: MultiTrace) -> bool:
    """Whether ``mu`` is exactly accepted by ``i`` (consumption search)."""
    seen = set()
    stack = [(i, mu)]
    while stack:
        t, m = stack.pop()
        if (t, m) in seen:
            continue
        seen.add((t, m))
        if m.is_empty:
            if accepts_empty(t):
                return True
            continue
        heads = {comp[0]: k for k, comp in enumerate(m.components) if comp}
        for a, _, f in _frontier(t):
            k = heads.get(a)
            if k is not None:
                stack.append((f, m.tail(k)))
    return False


@lru_cache(maxsize=1 << 16)
def simplify(i: Interaction) -> Interaction:
    """Drop empty operands of ``strict``/``coreg`` and empty-only ``alt``.

    The result has the same frontier (actions and loop depths) and the same
    pruning behavior as ``i``, up to this same simplification.  Loops are
    kept even around an empty body since they count in the loop depth.
    """
    if isinstance(i, (Strict, Coreg)):
        left, right = simplify(i.left), simplify(i.right)
        if isinstance(left, Empty):
            return right
        if isinstance(right, Empty):
            return left
        if left is i.left and right is i.right:
            return i
        return Strict(left, right) if isinstance(i, Strict) else Coreg(i.region, left, right)
    if isinstance(i, Alt):
        left, right = simplify(i.left), simplify(i.right)
        if isinstance(left, Empty) and isinstance(right, Empty):
            return EMPTY
        if left is i.left and right is i.right:
            return i
        return Alt(left, right)
    if isinstance(i, LOOPS):
        child = simplify(i.child)
        if child is i.child:
            return i
        return LoopS(child) if isinstance(i, LoopS) else LoopC(i.region, child)
    return i


@lru_cache(maxsize=1 << 16)
def _act_lifelines(i: Interaction) -> frozenset:
    if isinstance(i, Act):
        return frozenset((i.action.lifeline,))
    return frozenset().union(*(_act_lifelines(c) for c in children(i)))


def _interleaving(i: Interaction) -> bool:
    # coreg whose operands only share lifelines inside its region
    return isinstance(i, Coreg) and _act_lifelines(i.left) & _act_lifelines(i.right) <= i.region


def _idempotent(i: Interaction) -> bool:
    return isinstance(i, LoopC) and _act_lifelines(i.child) <= i.region


def _flatten(i: Interaction, out: list) -> None:
    if _interleaving(i):
        _flatten(i.left, out)
        _flatten(i.right, out)
    else:
        out.append(i)


@lru_cache(maxsize=1 << 16)
def canonical(i: Interaction):
    """A hashable key equal for interactions with the same analysis behavior.

    Interleaving ``coreg`` chains become multisets of their operands, and
    duplicate loops that are their own interleaving closure are merged.
    Frontier actions, loop depths, action counts outside loops and
    acceptance of the empty trace are preserved.
    """
    if isinstance(i, (Empty, Act)):
        return i
    if _interleaving(i):
        ops: list = []
        _flatten(i, ops)
        bag: dict = {}
        for op in ops:
            c = canonical(op)
            bag[c] = 1 if _idempotent(op) else bag.get(c, 0) + 1
        return ("par", frozenset(bag.items()))
    if isinstance(i, Strict):
        return ("strict", canonical(i.left), canonical(i.right))
    if isinstance(i, Alt):
        return ("alt", canonical(i.left), canonical(i.right))
    if isinstance(i, Coreg):
        return ("coreg", i.region, canonical(i.left), canonical(i.right))
    if isinstance(i, LoopS):
        return ("loopS", canonical(i.child))
    return ("loopC", i.region, canonical(i.child))


def clear_caches() -> None:
    canonical.cache_clear()
    _act_lifelines.cache_clear()
    simplify.cache_clear()
    _bounded.cache_clear()
    _prune.cache_clear()
    _frontier.cache_clear()
    accepts_empty.cache_clear()


# ---------------------------------------------------------------------------
# exploration


@dataclass
class ExploreConfig:
    strategy: str = "DFS"  # BFS | DFS | HCS
    max_depth: Optional[int] = None
    max_loop_instantiations: Optional[int] = None
    max_node_number: Optional[int] = None
    priorities: object = "lexicographic"  # "lexicographic" | "random" | Priorities
    seed: int = 0
    node_cap: int = 10**6

    def __post_init__(self):
        for name in ("max_depth", "max_loop_instantiations", "max_node_number"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.strategy not in ("BFS", "DFS", "HCS"):
            raise ValueError(f"unknown strategy {self.strategy!r}")


@dataclass(frozen=True)
class Priorities:
    """Weights added per frontier entry; higher weights are explored first."""

    emission: int = 0
    reception: int = 0
    loop: int = 0

    def weight(self, i: Interaction, entry: FrontierEntry) -> int:
        w = self.emission if entry.action.kind is Kind.EMIT else self.reception
        if loop_depth_at(i, entry.position) > 0:
            w += self.loop
        return w


def order_frontier(i: Interaction, entries: list, priorities, rng: Optional[random.Random]) -> list:
    if priorities == "random":
        entries = list(entries)
        rng.shuffle(entries)
        return entries
    if isinstance(priorities, Priorities):
        # stable sort keeps positional order among equal weights
        return sorted(entries, key=lambda e: -priorities.weight(i, e))
    return list(entries)


@dataclass
class ExploreNode:
    id: int
    interaction: Interaction
    trace: tuple  # actions executed from the root, in order
    depth: int
    loop_cost: int
    parent: Optional[int]
    via: Optional[FrontierEntry] = None


@dataclass
class ExplorationReport:
    node_count: int = 0
    edge_count: int = 0
    cuts: dict = field(default_factory=dict)
    artifacts: dict = field(default_factory=dict)

    def cut(self, reason: str) -> None:
        self.cuts[reason] = self.cuts.get(reason, 0) + 1


class ExploreLogger:
    """Receives exploration events; subclasses override what they need."""

    def start(self, root: ExploreNode, partition: Partition) -> None:
        pass

    def node(self, node: ExploreNode, is_leaf: bool) -> None:
        pass

    def edge(self, parent: ExploreNode, child: ExploreNode) -> None:
        pass

    def finish(self, report: ExplorationReport) -> None:
        pass


GENERATION_MODES = ("exact", "prefix", "terminal")


class TraceGenLogger(ExploreLogger):
    """Collects the multi-trace of explored paths.

    ``exact`` keeps nodes accepting the empty multi-trace, ``prefix`` keeps
    every node, ``terminal`` keeps leaves of the explored tree.  When
    ``directory`` is set one ``.htf`` file per distinct multi-trace is written.
    """

    def __init__(self, mode: str = "exact", partition: Optional[Partition] = None, directory=None, signature=None):
        if mode not in GENERATION_MODES:
            raise ValueError(f"unknown generation mode {mode!r}")
        self.mode = mode
        self.partition = partition
        self.directory = directory
        self.signature = signature
        self.traces: dict = {}  # MultiTrace -> node id, insertion ordered
        self._partition = partition

    def start(self, root, partition):
        if self._partition is None:
            self._partition = partition

    def node(self, node, is_leaf):
        if self.mode == "exact" and not accepts_empty(node.interaction):
            return
        if self.mode == "terminal" and not is_leaf:
            return
        mu = MultiTrace.from_global(node.trace, self._partition)
        self.traces.setdefault(mu, node.id)

    def finish(self, report):
        report.artifacts["multitraces"] = list(self.traces)
        if self.directory is None:
            return
        from pathlib import Path

        from .formats import serialize_htf

        out = Path(self.directory)
        out.mkdir(parents=True, exist_ok=True)
        files = []
        for mu, nid in self.traces.items():
            path = out / f"trace_{nid}.htf"
            path.write_text(serialize_htf(mu) + "\n", encoding="utf-8")
            files.append(path)
        report.artifacts["htf_files"] = files


def explore(i: Interaction, partition: Partition, cfg: Optional[ExploreConfig] = None, loggers: Iterable = ()) -> ExplorationReport:
    """Walk the execution tree of ``i`` under the filters of ``cfg``.

    The tree is never merged: two paths reaching equal interactions are
    distinct nodes.  Filters stop the creation of children; the node budget
    stops the whole walk.
    """
    cfg = cfg or ExploreConfig()
    loggers = list(loggers)
    rng = random.Random(cfg.seed)
    report = ExplorationReport()
    limit = cfg.node_cap if cfg.max_node_number is None else min(cfg.node_cap, cfg.max_node_number)

    nodes: dict = {}
    root = ExploreNode(0, i, (), 0, 0, None)
    nodes[0] = root
    report.node_count = 1
    for lg in loggers:
        lg.start(root, partition)

    open_ids = [0]
    expanded_below: dict = {}
    next_id = 1

    def pick():
        if cfg.strategy == "BFS":
            return open_ids.pop(0)
        if cfg.strategy == "DFS":
            return open_ids.pop()
        # HCS: the open node whose parent subtree has been expanded the least
        best = min(
            range(len(open_ids)),
            key=lambda k: (expanded_below.get(nodes[open_ids[k]].parent, 0), open_ids[k]),
        )
        return open_ids.pop(best)

    budget_hit = False
    while open_ids:
        nid = pick()
        node = nodes[nid]
        entries = order_frontier(node.interaction, _frontier(node.interaction), cfg.priorities, rng)
        kids = []
        for entry in entries:
            depth = node.depth + 1
            cost = node.loop_cost + loop_depth_at(node.interaction, entry.position)
            if cfg.max_depth is not None and depth > cfg.max_depth:
                report.cut("max_depth")
                continue
            if cfg.max_loop_instantiations is not None and cost > cfg.max_loop_instantiations:
                report.cut("max_loop_instantiations")
                continue
            if report.node_count >= limit:
                report.cut("max_node_number" if cfg.max_node_number is not None and limit == cfg.max_node_number else "node_cap")
                budget_hit = True
                break
            child = ExploreNode(next_id, entry.follow_up, node.trace + (entry.action,), depth, cost, nid, entry)
            next_id += 1
            nodes[child.id] = child
            report.node_count += 1
            report.edge_count += 1
            kids.append(child)
            for lg in loggers:
                lg.edge(node, child)
        for lg in loggers:
            lg.node(node, is_leaf=not kids)
        p = node.parent
        while p is not None:
            expanded_below[p] = expanded_below.get(p, 0) + 1
            p = nodes[p].parent
        if cfg.strategy == "DFS":
            open_ids.extend(k.id for k in reversed(kids))
        else:
            open_ids.extend(k.id for k in kids)
        if budget_hit:
            # created-but-unexpanded nodes are still reported as leaves
            for oid in open_ids:
                for lg in loggers:
                    lg.node(nodes[oid], is_leaf=True)
            open_ids.clear()
    for lg in loggers:
        lg.finish(report)
    log.debug("explored %d nodes, cuts=%s", report.node_count, report.cuts)
    return report


def bounded_traces(i: Interaction, max_loop_instantiations: int) -> frozenset:
    """Global traces of ``i`` using at most ``max_loop_instantiations`` loop
    instances, computed on the execution DAG.

    This is the trace set of an exact exploration under the same bound, but
    shared continuations are only visited once.
    """
    return _bounded(i, max_loop_instantiations)


@lru_cache(maxsize=1 << 14)
def _bounded(i: Interaction, budget: int) -> frozenset:
    out = {()} if accepts_empty(i) else set()
    for a, p, f in _frontier(i):
        d = loop_depth_at(i, p)
        if d <= budget:
            out.update((a,) + t for t in _bounded(f, budget - d))
    return frozenset(out)


def generate_accepted(
    i: Interaction,
    partition: Partition,
    max_loop_instantiations: Optional[int] = None,
    max_node_number: Optional[int] = None,
    mode: str = "exact",
    seed: int = 0,
    max_depth: Optional[int] = None,
    strategy: str = "DFS",
) -> set:
    bounded = max_loop_instantiations is not None or loop_count(i) == 0
    if mode == "exact" and bounded and max_node_number is None and max_depth is None:
        budget = max_loop_instantiations if max_loop_instantiations is not None else 0
        return {MultiTrace.from_global(t, partition) for t in bounded_traces(i, budget)}
    logger = TraceGenLogger(mode, partition)
    cfg = ExploreConfig(
        strategy=strategy,
        max_depth=max_depth,
        max_loop_instantiations=max_loop_instantiations,
        max_node_number=max_node_number,
        seed=seed,
    )
    explore(i, partition, cfg, [logger])
    return set(logger.traces)
