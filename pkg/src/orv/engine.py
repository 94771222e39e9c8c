"""Multi-trace analysis: the analysis graph, its rules and the search for a verdict.

Vertices are ``(interaction, multi-trace, observation flags, measure)``.
From a vertex the rules are tried as follows:

* ``Rp`` reaches ``Ok`` when the multi-trace is empty;
* ``Re`` consumes the head of a component with a matching frontier action;
* ``Rs`` executes a frontier action without consuming anything, allowed on
  a co-localization that is either not yet observed (with ``before``) or
  fully consumed, and only if the measure can be decremented;
* ``Rf`` reaches ``Ko`` when nothing else applies.
"""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Union

from .ir import (
    Action,
    Interaction,
    Kind,
    Position,
    actions_outside_loops,
    format_position,
    lifelines_of,
    loop_count,
    loop_depth_at,
    max_loop_depth,
)
from .semantics import FrontierEntry, _frontier, accepts_empty, canonical, simplify
from .traces import MultiTrace, PartitionError, flag_started, no_flags

DEFAULT_NODE_CAP = 10**6


class Verdict(enum.Enum):
    PASS = "Pass"
    WEAK_PASS = "WeakPass"
    WEAK_FAIL = "WeakFail"

    def __str__(self):
        return self.value

    @property
    def omega(self) -> str:
        """Projection onto the two-valued verdict: ``Pass`` or ``Inconc``."""
        return "Inconc" if self is Verdict.WEAK_FAIL else "Pass"

    @property
    def rank(self) -> int:
        return {Verdict.WEAK_FAIL: 0, Verdict.WEAK_PASS: 1, Verdict.PASS: 2}[self]

    @classmethod
    def parse(cls, text: str) -> "Verdict":
        for v in cls:
            if v.value.lower() == text.strip().lower():
                return v
        raise ValueError(f"unknown verdict {text!r}")


# ---------------------------------------------------------------------------
# measures


class Measure(NamedTuple):
    lam: int
    alpha: int

    def __str__(self):
        return f"({self.lam},{self.alpha})"


Fixed = int
LoopSource = Union[str, Fixed]  # "depth" | "count" | n
ActSource = Union[str, Fixed]  # "outside" | n


@dataclass(frozen=True)
class LoopActPolicy:
    """The (λ, α) criterion bounding consecutive simulation steps.

    ``loop_source`` gives the initial loop budget: the maximal nesting depth
    of loops, their total count, or a fixed number.  ``act_source`` gives
    the budget of actions outside loops: their count or a fixed number.
    With ``multiply`` both are scaled by the length of the analyzed
    multi-trace.  With ``reset`` each execution step restores the budgets
    from the new interaction, otherwise they are carried over.
    """

    loop_source: LoopSource = "depth"
    act_source: ActSource = "outside"
    multiply: bool = False
    reset: bool = True
    before: bool = True

    def __post_init__(self):
        if not (self.loop_source in ("depth", "count") or _is_count(self.loop_source)):
            raise ValueError(f"invalid loop budget source {self.loop_source!r}")
        if not (self.act_source == "outside" or _is_count(self.act_source)):
            raise ValueError(f"invalid action budget source {self.act_source!r}")

    def _scale(self, n: int, length: int) -> int:
        return n * length if self.multiply else n

    def loop_budget(self, i: Interaction, length: int) -> int:
        if self.loop_source == "depth":
            n = max_loop_depth(i)
        elif self.loop_source == "count":
            n = loop_count(i)
        else:
            n = self.loop_source
        return self._scale(n, length)

    def act_budget(self, i: Interaction, length: int) -> int:
        n = actions_outside_loops(i) if self.act_source == "outside" else self.act_source
        return self._scale(n, length)

    def init(self, i: Interaction, length: int = 1) -> Measure:
        return Measure(self.loop_budget(i, length), self.act_budget(i, length))

    def decrement(self, j: Measure, i: Interaction, p: Position, follow_up: Interaction, length: int = 1) -> Optional[Measure]:
        """The measure after simulating the action at ``p``, or ``None`` if blocked."""
        d = loop_depth_at(i, p)
        act = self.act_budget(follow_up, length)
        if d == 0:
            if j.alpha < 1:
                return None
            return Measure(j.lam, min(j.alpha - 1, act))
        if j.lam < d:
            return None
        return Measure(j.lam - d, act)


def _is_count(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


DEFAULT_POLICY = LoopActPolicy()
LIBERAL_POLICY = LoopActPolicy(multiply=True, reset=False)


def decrement_loopact(j, i: Interaction, p: Position, policy: LoopActPolicy = DEFAULT_POLICY) -> Optional[Measure]:
    """Decrement ``j`` for simulating the action at ``p`` in ``i``."""
    for _, q, f in _frontier(i):
        if q == tuple(p):
            return policy.decrement(Measure(*j), i, q, f)
    raise ValueError(f"position {format_position(tuple(p))} is not in the frontier")


# ---------------------------------------------------------------------------
# graph


class Rule(enum.Enum):
    RP = "Rp"
    RE = "Re"
    RS = "Rs"
    RF = "Rf"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class AnalysisNode:
    interaction: Interaction
    multitrace: MultiTrace
    flags: tuple
    measure: Measure
    # path statistics, informative only
    sim_before: int = 0
    sim_after: int = 0

    def __post_init__(self):
        if len(self.flags) != len(self.multitrace.partition.colocs):
            raise PartitionError("flags and multi-trace must share their partition")

    @property
    def ended(self) -> tuple:
        return tuple(f and not t for f, t in zip(self.flags, self.multitrace.components))


class Edge(NamedTuple):
    rule: Rule
    entry: Optional[FrontierEntry]
    target: Optional[AnalysisNode]  # None for Ok / Ko

    @property
    def action(self) -> Optional[Action]:
        return self.entry.action if self.entry else None

    @property
    def position(self) -> Optional[Position]:
        return self.entry.position if self.entry else None

    def __str__(self):
        if self.entry is None:
            return str(self.rule)
        return f"{self.rule}({self.entry.action}@{format_position(self.entry.position)})"


def root_node(i: Interaction, mu: MultiTrace, policy: LoopActPolicy = DEFAULT_POLICY) -> AnalysisNode:
    return AnalysisNode(i, mu, no_flags(mu.partition), policy.init(i, max(1, len(mu))))


def successors(v: AnalysisNode, policy: LoopActPolicy = DEFAULT_POLICY, simulate: bool = True, length: Optional[int] = None) -> list:
    """Outgoing edges of ``v``, executions first, each group in frontier order."""
    mu = v.multitrace
    if mu.is_empty:
        return [Edge(Rule.RP, None, None)]
    length = max(1, len(mu)) if length is None else length
    part = mu.partition
    heads = {comp[0]: k for k, comp in enumerate(mu.components) if comp}
    front = _frontier(v.interaction)
    edges = []
    for entry in front:
        k = heads.get(entry.action)
        if k is None:
            continue
        nxt = simplify(entry.follow_up)
        j = policy.init(nxt, length) if policy.reset else v.measure
        target = AnalysisNode(nxt, mu.tail(k), flag_started(v.flags, k), j, v.sim_before, v.sim_after)
        edges.append(Edge(Rule.RE, entry, target))
    if simulate:
        for entry in front:
            k = part.index_of(entry.action.lifeline)
            before = not v.flags[k] and policy.before and bool(mu.components[k])
            after = not mu.components[k]
            if not (before or after):
                continue
            nxt = simplify(entry.follow_up)
            j = policy.decrement(v.measure, v.interaction, entry.position, nxt, length)
            if j is None:
                continue
            target = AnalysisNode(
                nxt,
                mu,
                v.flags,
                j,
                v.sim_before + (0 if after else 1),
                v.sim_after + (1 if after else 0),
            )
            edges.append(Edge(Rule.RS, entry, target))
    if not edges:
        return [Edge(Rule.RF, None, None)]
    return edges


# ---------------------------------------------------------------------------
# search


@dataclass(frozen=True)
class AnalysisPriorities:
    """Weights of candidate steps; heavier steps are explored first."""

    emission: int = 0
    reception: int = 0
    loop: int = 0
    simu: int = -1

    def weight(self, v: AnalysisNode, e: Edge) -> int:
        w = 0
        if e.entry is not None:
            w += self.emission if e.entry.action.kind is Kind.EMIT else self.reception
            if loop_depth_at(v.interaction, e.entry.position) > 0:
                w += self.loop
        if e.rule is Rule.RS:
            w += self.simu
        return w


KINDS = ("simulate", "accept", "prefix")


@dataclass
class AnalysisConfig:
    kind: str = "simulate"
    policy: LoopActPolicy = DEFAULT_POLICY
    strategy: str = "DFS"  # DFS | BFS | HCS
    priorities: AnalysisPriorities = field(default_factory=AnalysisPriorities)
    goal: Optional[Verdict] = Verdict.WEAK_PASS
    node_cap: int = DEFAULT_NODE_CAP
    graphic: bool = False
    dedup: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown analysis kind {self.kind!r}")
        if self.strategy not in ("DFS", "BFS", "HCS"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.node_cap < 1:
            raise ValueError("node_cap must be positive")


@dataclass
class AnalysisStats:
    nodes: int = 0
    re_steps: int = 0
    rs_steps: int = 0
    seconds: float = 0.0
    cap_hit: bool = False
    short_circuit: bool = False


@dataclass
class AnalysisReport:
    verdict: Verdict
    witness: Optional[list]  # list[Edge], Rp excluded
    stats: AnalysisStats
    graph: Optional["AnalysisGraph"] = None

    @property
    def witness_re(self) -> int:
        return sum(1 for e in self.witness or () if e.rule is Rule.RE)

    @property
    def witness_rs(self) -> int:
        return sum(1 for e in self.witness or () if e.rule is Rule.RS)

    def witness_trace(self) -> tuple:
        return tuple(e.entry.action for e in self.witness or ())


@dataclass
class AnalysisGraph:
    """Recorded part of the analysis graph, for rendering."""

    nodes: dict = field(default_factory=dict)  # id -> AnalysisNode
    edges: list = field(default_factory=list)  # (src id, Edge, dst id or "Ok"/"Ko")


def _rank(v: AnalysisNode, e: Edge, k: int, pri: AnalysisPriorities) -> tuple:
    # heavier first; then executions before simulations, emissions before
    # receptions (an emission unlocks its receptions), then frontier order
    return (-pri.weight(v, e), e.rule is Rule.RS, e.entry.action.kind is Kind.RECEIVE, k)


class _Search:
    def __init__(self, cfg: AnalysisConfig, simulate: bool, length: int, record: Optional[AnalysisGraph]):
        self.cfg = cfg
        self.simulate = simulate
        self.length = length
        self.record = record
        self.stats = AnalysisStats()
        self.next_id = 0

    def run(self, root: AnalysisNode, stop_at: Optional[Verdict], accept):
        """Search from ``root`` for nodes satisfying ``accept``.

        Returns ``(witness, simulation count)`` of the best path found, or
        ``None``.
        """
        cfg = self.cfg
        pri = cfg.priorities
        nodes = {}
        parent = {}
        via = {}
        expanded_below = {}
        rid = self._new(nodes, root)
        parent[rid] = None
        open_ids = [rid]
        best = None
        seen: dict = {}  # (i, mu, flags) -> measures already expanded
        while open_ids:
            if self.stats.nodes >= cfg.node_cap:
                self.stats.cap_hit = True
                break
            nid = self._pick(open_ids, parent, expanded_below)
            v = nodes[nid]
            if cfg.dedup:
                # every rule is monotone in the measure, so a vertex whose
                # (canonical) twin was expanded with a budget at least as large adds nothing
                key = (canonical(v.interaction), v.multitrace, v.flags)
                done = seen.setdefault(key, [])
                j = v.measure
                if any(m.lam >= j.lam and m.alpha >= j.alpha for m in done):
                    continue
                done[:] = [m for m in done if not (j.lam >= m.lam and j.alpha >= m.alpha)]
                done.append(j)
            self.stats.nodes += 1
            p = parent[nid] if cfg.strategy == "HCS" else None
            while p is not None:
                expanded_below[p] = expanded_below.get(p, 0) + 1
                p = parent[p]
            ok = accept(v)
            if ok:
                path = self._path(nid, parent, via)
                sims = sum(1 for e in path if e.rule is Rule.RS)
                if self.record is not None:
                    self.record.edges.append((nid, Edge(Rule.RP, None, None), "Ok"))
                if best is None or sims < best[1]:
                    best = (path, sims)
                if stop_at is not None and (sims == 0 or stop_at is Verdict.WEAK_PASS):
                    self.stats.short_circuit = True
                    break
                continue
            edges = successors(v, cfg.policy, self.simulate, self.length)
            if edges[0].target is None:
                # Rf, or an emptied multi-trace that ``accept`` refuses
                if self.record is not None:
                    self.record.edges.append((nid, Edge(Rule.RF, None, None), "Ko"))
                continue
            ranked = sorted(
                range(len(edges)),
                key=lambda k: _rank(v, edges[k], k, pri),
            )
            kids = []
            for k in ranked:
                e = edges[k]
                cid = self._new(nodes, e.target)
                parent[cid] = nid
                via[cid] = e
                kids.append(cid)
                if e.rule is Rule.RE:
                    self.stats.re_steps += 1
                else:
                    self.stats.rs_steps += 1
                if self.record is not None:
                    self.record.edges.append((nid, e, cid))
            if cfg.strategy == "DFS":
                open_ids.extend(reversed(kids))
            else:
                open_ids.extend(kids)
        return best

    def _new(self, nodes, v):
        nid = self.next_id
        self.next_id += 1
        nodes[nid] = v
        if self.record is not None:
            self.record.nodes[nid] = v
        return nid

    def _pick(self, open_ids, parent, expanded_below):
        if self.cfg.strategy == "DFS":
            return open_ids.pop()
        if self.cfg.strategy == "BFS":
            return open_ids.pop(0)
        best = min(
            range(len(open_ids)),
            key=lambda k: (expanded_below.get(parent[open_ids[k]], 0), open_ids[k]),
        )
        return open_ids.pop(best)

    @staticmethod
    def _path(nid, parent, via):
        path = []
        while parent[nid] is not None:
            path.append(via[nid])
            nid = parent[nid]
        path.reverse()
        return path


def analyze(i: Interaction, mu: MultiTrace, cfg: Optional[AnalysisConfig] = None) -> AnalysisReport:
    """Search the analysis graph of ``(i, mu)`` for a verdict.

    A first search without simulation decides ``Pass``; the full search
    only runs when it fails, so a ``WeakPass`` always means that every Ok
    path found needs simulation.
    """
    cfg = cfg or AnalysisConfig()
    missing = lifelines_of(i) - mu.partition.lifelines
    if missing:
        raise PartitionError(f"multi-trace has no co-localization for {sorted(missing)}")
    t0 = time.perf_counter()
    length = max(1, len(mu))
    root = root_node(i, mu, cfg.policy)
    stats = AnalysisStats()
    graph = None

    def run(simulate, stop_at, accept):
        nonlocal graph
        graph = AnalysisGraph() if cfg.graphic else None
        s = _Search(cfg, simulate, length, graph)
        s.stats = stats
        return s.run(root, stop_at, accept)

    verdict, witness = Verdict.WEAK_FAIL, None
    if cfg.kind in ("simulate", "accept"):
        found = run(False, Verdict.PASS, _consumed)
        if found is not None:
            verdict, witness = Verdict.PASS, found[0]
        elif cfg.kind == "simulate" and not stats.cap_hit:
            found = run(True, cfg.goal, _consumed)
            if found is not None:
                verdict, witness = Verdict.WEAK_PASS, found[0]
    else:
        found = run(False, Verdict.PASS, _exact)
        if found is not None:
            verdict, witness = Verdict.PASS, found[0]
        elif not stats.cap_hit:
            # consumed: the projection of a prefix of some accepted trace
            found = run(False, Verdict.WEAK_PASS, _consumed)
            if found is not None:
                verdict, witness = Verdict.WEAK_PASS, found[0]
    stats.seconds = time.perf_counter() - t0
    return AnalysisReport(verdict, witness, stats, graph)


def _consumed(v: AnalysisNode) -> bool:
    return v.multitrace.is_empty


def _exact(v: AnalysisNode) -> bool:
    return v.multitrace.is_empty and accepts_empty(v.interaction)


def analysis_kind_accept(i: Interaction, mu: MultiTrace, **kw) -> Verdict:
    return analyze(i, mu, AnalysisConfig(kind="accept", **kw)).verdict


def analysis_kind_prefix(i: Interaction, mu: MultiTrace, **kw) -> Verdict:
    return analyze(i, mu, AnalysisConfig(kind="prefix", **kw)).verdict


def replay_witness(i: Interaction, mu: MultiTrace, witness: list, policy: LoopActPolicy = DEFAULT_POLICY) -> AnalysisNode:
    """Follow ``witness`` from the root, checking every step is a legal edge."""
    v = root_node(i, mu, policy)
    length = max(1, len(mu))
    for step in witness:
        match = [e for e in successors(v, policy, True, length) if e.rule is step.rule and e.entry == step.entry]
        if not match:
            raise ValueError(f"step {step} is not applicable")
        v = match[0].target
    return v
