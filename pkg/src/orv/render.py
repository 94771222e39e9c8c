"""DOT and plain-text renderings of interactions, execution trees and analysis graphs."""
from __future__ import annotations

from typing import Optional

from .engine import AnalysisGraph, AnalysisNode, Rule
from .ir import (
    Act,
    Alt,
    Coreg,
    Empty,
    Interaction,
    Kind,
    LoopC,
    LoopS,
    Signature,
    Strict,
    format_position,
    iter_positions,
)
from .semantics import ExploreLogger, ExploreNode, accepts_empty
from .traces import format_trace


def dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _region_label(region, sig: Optional[Signature]) -> str:
    if sig is not None:
        order = {l: k for k, l in enumerate(sig.lifelines)}
        names = sorted(region, key=lambda l: (order.get(l, len(order)), l))
    else:
        names = sorted(region)
    return ",".join(names)


def node_label(i: Interaction, sig: Optional[Signature] = None) -> str:
    """Label of the root operator (or action) of ``i``."""
    if isinstance(i, Empty):
        return "∅"
    if isinstance(i, Act):
        return str(i.action)
    if isinstance(i, Strict):
        return "strict"
    if isinstance(i, Alt):
        return "alt"
    if isinstance(i, LoopS):
        return "loopS"
    every = sig is not None and i.region == frozenset(sig.lifelines)
    if isinstance(i, Coreg):
        if not i.region:
            return "seq"
        return "par" if every else f"coreg({_region_label(i.region, sig)})"
    if isinstance(i, LoopC):
        if not i.region:
            return "loopW"
        return "loopP" if every else f"loopC({_region_label(i.region, sig)})"
    raise TypeError(i)


def term_dot(i: Interaction, sig: Optional[Signature] = None, name: str = "interaction") -> str:
    """Term tree of ``i``: one DOT node per position."""
    lines = [f"digraph {name} {{", "  node [shape=box, fontname=monospace];"]
    ids = {}
    for p, t in iter_positions(i):
        nid = "p_" + ("".join(map(str, p)) or "root")
        ids[p] = nid
        shape = "" if isinstance(t, (Act, Empty)) else ", style=rounded"
        lines.append(f"  {nid} [label={dot_quote(node_label(t, sig))}{shape}];")
        if p:
            lines.append(f"  {ids[p[:-1]]} -> {nid};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def term_text(i: Interaction, sig: Optional[Signature] = None) -> str:
    """Indented outline of the term tree, one position per line."""
    out = []
    for p, t in iter_positions(i):
        out.append(f"{'  ' * len(p)}{node_label(t, sig)}  @{format_position(p)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# ASCII sequence diagram


def ascii_diagram(i: Interaction, sig: Signature, col_width: int = 12) -> str:
    """Sketch of ``i`` as a sequence diagram.

    Lifelines are columns and message exchanges are rows.  An operator opens
    a bracketed region ``[op`` closed by ``]``; ``--`` separates operands.
    """
    rows: list = []
    _rows(i, sig, 0, rows)
    lifelines = list(sig.lifelines)
    gutter = max([len(lbl) + 2 * d for d, lbl, _ in rows] + [4]) + 2
    width = col_width
    for l in lifelines:
        width = max(width, len(l) + 2)
    x = {l: gutter + k * width + width // 2 for k, l in enumerate(lifelines)}
    total = gutter + width * len(lifelines)

    def blank():
        line = [" "] * total
        for l in lifelines:
            line[x[l]] = "|"
        return line

    header = [" "] * total
    for l in lifelines:
        start = x[l] - len(l) // 2
        header[start:start + len(l)] = l
    out = ["".join(header).rstrip()]
    for depth, label, draw in rows:
        line = blank()
        prefix = "  " * depth + label
        line[:len(prefix)] = prefix
        if draw is not None:
            draw(line, x)
        out.append("".join(line).rstrip())
    out.append("".join(blank()).rstrip())
    return "\n".join(out) + "\n"


def _put(line, at, text):
    for k, ch in enumerate(text):
        if 0 <= at + k < len(line):
            line[at + k] = ch


def _arrow(sender, message, receivers):
    def draw(line, x):
        s = x[sender]
        ends = [x[r] for r in receivers if r != sender]
        if not ends:
            _put(line, s, f"|-{message}-> |")
            return
        lo, hi = min([s] + ends), max([s] + ends)
        for k in range(lo + 1, hi):
            if line[k] != "|":
                line[k] = "-"
        # label in the first segment next to the sender, arrowheads on top
        near = min(ends, key=lambda e: abs(e - s))
        a, b = min(s, near), max(s, near)
        _put(line, a + 1 + max(0, (b - a - 1 - len(message)) // 2), message)
        for e in ends:
            line[e] = "|"
            if e > s:
                line[e - 1] = ">"
            else:
                line[e + 1] = "<"

    return draw


def _mark(a):
    def draw(line, x):
        text = f"{a.kind.value}{a.message}"
        _put(line, x[a.lifeline] + 1, text)

    return draw


def _broadcast(i):
    if not (isinstance(i, Strict) and isinstance(i.left, Act) and i.left.action.kind is Kind.EMIT):
        return None
    m = i.left.action.message
    recs = []
    t = i.right
    while isinstance(t, Coreg) and not t.region and isinstance(t.left, Act):
        recs.append(t.left.action)
        t = t.right
    if not isinstance(t, Act):
        return None
    recs.append(t.action)
    if any(a.kind is not Kind.RECEIVE or a.message != m for a in recs):
        return None
    return i.left.action.lifeline, m, [a.lifeline for a in recs]


def _rows(i, sig, depth, rows):
    if isinstance(i, Empty):
        rows.append((depth, "o", None))
        return
    if isinstance(i, Act):
        rows.append((depth, "", _mark(i.action)))
        return
    b = _broadcast(i)
    if b is not None:
        rows.append((depth, "", _arrow(*b)))
        return
    label = node_label(i, sig)
    rows.append((depth, "[" + label, None))
    if isinstance(i, (LoopS, LoopC)):
        _rows(i.child, sig, depth + 1, rows)
    else:
        ops = [i.left]
        t = i.right
        while type(t) is type(i) and getattr(t, "region", None) == getattr(i, "region", None) and _broadcast(t) is None:
            ops.append(t.left)
            t = t.right
        ops.append(t)
        for k, op in enumerate(ops):
            if k:
                rows.append((depth, "--", None))
            _rows(op, sig, depth + 1, rows)
    rows.append((depth, "]", None))


# ---------------------------------------------------------------------------
# execution trees


class DotTreeLogger(ExploreLogger):
    """Records the explored execution tree as DOT."""

    def __init__(self, sig: Optional[Signature] = None, vertical: bool = True):
        self.sig = sig
        self.vertical = vertical
        self.lines: list = []

    def start(self, root, partition):
        self.lines = [
            "digraph execution_tree {",
            f"  rankdir={'TB' if self.vertical else 'LR'};",
            "  node [shape=box, fontname=monospace];",
        ]

    def node(self, node: ExploreNode, is_leaf: bool):
        label = f"#{node.id} depth={node.depth} loops={node.loop_cost}"
        if accepts_empty(node.interaction):
            label += " [ε]"
        self.lines.append(f"  n{node.id} [label={dot_quote(label)}];")

    def edge(self, parent: ExploreNode, child: ExploreNode):
        via = child.via
        label = f"{via.action}@{format_position(via.position)}"
        self.lines.append(f"  n{parent.id} -> n{child.id} [label={dot_quote(label)}];")

    def finish(self, report):
        self.lines.append("}")
        report.artifacts["dot"] = self.dot()

    def dot(self) -> str:
        return "\n".join(self.lines) + "\n"


# ---------------------------------------------------------------------------
# analysis graphs


def badges(v: AnalysisNode) -> str:
    """Per-component observation markers.

    ``started`` / ``ended`` flag observation, ``sb=n`` and ``sa=n`` count
    simulation steps before the start and after the end of observation.
    """
    out = []
    for k, (flag, comp) in enumerate(zip(v.flags, v.multitrace.components)):
        marks = []
        if flag:
            marks.append("started")
        if flag and not comp:
            marks.append("ended")
        out.append(f"c{k}:" + ("+".join(marks) or "unobserved"))
    if v.sim_before:
        out.append(f"sb={v.sim_before}")
    if v.sim_after:
        out.append(f"sa={v.sim_after}")
    return " ".join(out)


def analysis_dot(graph: AnalysisGraph, vertical: bool = True) -> str:
    lines = [
        "digraph analysis {",
        f"  rankdir={'TB' if vertical else 'LR'};",
        "  node [shape=box, fontname=monospace];",
        '  Ok [shape=diamond, style=filled, fillcolor=blue, fontcolor=white, label="Ok"];',
        '  Ko [shape=diamond, style=filled, fillcolor=red, fontcolor=white, label="Ko"];',
    ]
    for nid, v in graph.nodes.items():
        comps = " | ".join(format_trace(t) for t in v.multitrace.components)
        label = f"#{nid} (λ,α)={v.measure}\n{comps}\n{badges(v)}"
        lines.append(f"  v{nid} [label={dot_quote(label)}];")
    colors = {Rule.RE: "orange", Rule.RS: "gray", Rule.RP: "blue", Rule.RF: "red"}
    for src, e, dst in graph.edges:
        target = dst if isinstance(dst, str) else f"v{dst}"
        label = str(e)
        lines.append(f"  v{src} -> {target} [label={dot_quote(label)}, color={colors[e.rule]}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
