"""Readers and writers for the ``.hsf``, ``.hif``, ``.htf`` and ``.hcf`` text formats."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .engine import AnalysisConfig, AnalysisPriorities, LoopActPolicy, Verdict
from .ir import (
    EMPTY,
    Act,
    Action,
    Alt,
    Coreg,
    Empty,
    Interaction,
    Kind,
    LoopC,
    LoopS,
    Signature,
    Strict,
    nary,
)
from .semantics import ExploreConfig, Priorities
from .traces import MultiTrace, Partition, PartitionError


class ParseError(ValueError):
    """Syntax or validation error at a 1-based ``line``/``col``."""

    def __init__(self, message: str, line: int, col: int, expected: str = ""):
        self.message = message
        self.line = line
        self.col = col
        self.expected = expected
        text = f"line {line}, column {col}: {message}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)


# ---------------------------------------------------------------------------
# lexing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<section>@[A-Za-z_]+)
  | (?P<keyword>\#[A-Za-z]+)
  | (?P<arrowbar>->\|)
  | (?P<arrow>->)
  | (?P<dashes>--)
  | (?P<int>-?[0-9]+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[(){}\[\],;.!?=|])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            out.append(Token("punct" if kind in ("arrowbar", "arrow", "dashes") else kind, value, line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.k = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.k]

    def peek(self, n: int = 1) -> Token:
        return self.toks[min(self.k + n, len(self.toks) - 1)]

    def error(self, message: str, expected: str = "", tok: Optional[Token] = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.col, expected)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def accept(self, text: str) -> Optional[Token]:
        if self.at(text):
            t = self.tok
            self.k += 1
            return t
        return None

    def expect(self, text: str) -> Token:
        t = self.accept(text)
        if t is None:
            self.error(f"unexpected {self._describe()}", repr(text))
        return t

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "id":
            self.error(f"unexpected {self._describe()}", what)
        t = self.tok
        self.k += 1
        return t

    def integer(self) -> int:
        if self.tok.kind != "int":
            self.error(f"unexpected {self._describe()}", "integer")
        t = self.tok
        self.k += 1
        return int(t.text)

    def end(self):
        if self.tok.kind != "eof":
            self.error(f"unexpected {self._describe()}", "end of input")

    def _describe(self) -> str:
        return "end of input" if self.tok.kind == "eof" else repr(self.tok.text)


# ---------------------------------------------------------------------------
# signatures


def parse_hsf(text: str) -> Signature:
    p = _Parser(text)
    blocks: dict = {}
    while p.tok.kind != "eof":
        if p.tok.kind != "section" or p.tok.text not in ("@message", "@lifeline"):
            p.error(f"unexpected {p._describe()}", "'@message' or '@lifeline'")
        head = p.tok
        p.k += 1
        if head.text in blocks:
            p.error(f"duplicate {head.text} block", tok=head)
        blocks[head.text] = _id_block(p, head.text[1:])
    lifelines = blocks.get("@lifeline", ())
    messages = blocks.get("@message", ())
    return Signature(tuple(t.text for t in lifelines), tuple(t.text for t in messages))


def _id_block(p: _Parser, what: str) -> tuple:
    p.expect("{")
    ids = []
    seen = set()
    while not p.at("}"):
        t = p.ident(what)
        if t.text in seen:
            p.error(f"duplicate {what} identifier {t.text!r}", tok=t)
        seen.add(t.text)
        ids.append(t)
        if not p.accept(";"):
            break
    p.expect("}")
    return tuple(ids)


def serialize_hsf(sig: Signature) -> str:
    return (
        "@message{\n    " + ";".join(sig.messages) + "\n}\n"
        "@lifeline{\n    " + ";".join(sig.lifelines) + "\n}\n"
    )


# ---------------------------------------------------------------------------
# interactions

_NARY = ("strict", "seq", "par", "alt")
_UNARY = ("loopS", "loopW", "loopP")


def parse_hif(text: str, sig: Signature) -> Interaction:
    p = _Parser(text)
    i = _term(p, sig)
    p.end()
    return i


def _lifeline(p: _Parser, sig: Signature) -> str:
    t = p.ident("lifeline")
    if t.text not in sig.lifelines:
        p.error(f"undeclared lifeline {t.text!r}", tok=t)
    return t.text


def _message(p: _Parser, sig: Signature) -> str:
    t = p.ident("message")
    if t.text not in sig.messages:
        p.error(f"undeclared message {t.text!r}", tok=t)
    return t.text


def _region(p: _Parser, sig: Signature) -> frozenset:
    p.expect("(")
    out = []
    if not p.at(")"):
        out.append(_lifeline(p, sig))
        while p.accept(","):
            out.append(_lifeline(p, sig))
    p.expect(")")
    return frozenset(out)


def _operands(p: _Parser, sig: Signature) -> list:
    p.expect("(")
    items = [_term(p, sig)]
    while p.accept(","):
        items.append(_term(p, sig))
    p.expect(")")
    return items


def _term(p: _Parser, sig: Signature) -> Interaction:
    t = p.tok
    if t.kind != "id":
        p.error(f"unexpected {p._describe()}", "interaction")
    nxt = p.peek().text
    if t.text == "o" and nxt not in ("--", "->"):
        p.k += 1
        return EMPTY
    if nxt == "(" and t.text in _NARY + _UNARY + ("coreg", "loopC"):
        p.k += 1
        if t.text == "coreg":
            region = _region(p, sig)
            items = _operands(p, sig)
            return nary(lambda a, b: Coreg(region, a, b), items)
        if t.text == "loopC":
            region = _region(p, sig)
            items = _operands(p, sig)
            if len(items) != 1:
                p.error("loopC takes exactly one operand", tok=t)
            return LoopC(region, items[0])
        items = _operands(p, sig)
        if t.text in _UNARY:
            if len(items) != 1:
                p.error(f"{t.text} takes exactly one operand", tok=t)
            child = items[0]
            if t.text == "loopS":
                return LoopS(child)
            if t.text == "loopW":
                return LoopC(frozenset(), child)
            return LoopC(frozenset(sig.lifelines), child)
        make = {
            "strict": Strict,
            "alt": Alt,
            "seq": lambda a, b: Coreg(frozenset(), a, b),
            "par": lambda a, b: Coreg(frozenset(sig.lifelines), a, b),
        }[t.text]
        return nary(make, items)
    if nxt == "->":
        # reception "m -> l"
        m = _message(p, sig)
        p.expect("->")
        return Act(Action(_lifeline(p, sig), Kind.RECEIVE, m))
    if nxt == "--":
        sender = _lifeline(p, sig)
        p.expect("--")
        m = _message(p, sig)
        if p.accept("->|"):
            return Act(Action(sender, Kind.EMIT, m))
        p.expect("->")
        if p.accept("("):
            targets = [_lifeline(p, sig)]
            while p.accept(","):
                targets.append(_lifeline(p, sig))
            p.expect(")")
        else:
            targets = [_lifeline(p, sig)]
        recs = [Act(Action(r, Kind.RECEIVE, m)) for r in targets]
        return Strict(Act(Action(sender, Kind.EMIT, m)), nary(lambda a, b: Coreg(frozenset(), a, b), recs))
    p.error(f"unexpected {p._describe()}", "interaction")


def serialize_hif(i: Interaction, sig: Signature, indent: Optional[int] = None) -> str:
    """Canonical text of ``i``; with ``indent`` operands go on separate lines."""
    return _emit(i, sig, indent, 0)


def _broadcast(i) -> Optional[str]:
    if not (isinstance(i, Strict) and isinstance(i.left, Act) and i.left.action.kind is Kind.EMIT):
        return None
    m = i.left.action.message
    targets = []
    t = i.right
    while isinstance(t, Coreg) and not t.region and isinstance(t.left, Act):
        targets.append(t.left.action)
        t = t.right
    if not isinstance(t, Act):
        return None
    targets.append(t.action)
    if any(a.kind is not Kind.RECEIVE or a.message != m for a in targets):
        return None
    names = [a.lifeline for a in targets]
    dest = names[0] if len(names) == 1 else "(" + ",".join(names) + ")"
    return f"{i.left.action.lifeline} -- {m} -> {dest}"


def _head(i, sig: Signature):
    """Operator label and a predicate recognizing same-operator chains."""
    if isinstance(i, Strict):
        return "strict", lambda t: isinstance(t, Strict) and _broadcast(t) is None
    if isinstance(i, Alt):
        return "alt", lambda t: isinstance(t, Alt)
    if isinstance(i, Coreg):
        if not i.region:
            label = "seq"
        elif i.region == frozenset(sig.lifelines):
            label = "par"
        else:
            label = f"coreg({','.join(_ordered(i.region, sig))})"
        return label, lambda t: isinstance(t, Coreg) and t.region == i.region
    raise TypeError(i)


def _ordered(region, sig: Signature) -> list:
    order = {l: k for k, l in enumerate(sig.lifelines)}
    return sorted(region, key=lambda l: (order.get(l, len(order)), l))


def _emit(i, sig, indent, level) -> str:
    if isinstance(i, Empty):
        return "o"
    if isinstance(i, Act):
        a = i.action
        if a.kind is Kind.EMIT:
            return f"{a.lifeline} -- {a.message} ->|"
        return f"{a.message} -> {a.lifeline}"
    b = _broadcast(i)
    if b is not None:
        return b
    if isinstance(i, LoopS):
        return _wrap("loopS", [i.child], sig, indent, level)
    if isinstance(i, LoopC):
        if not i.region:
            label = "loopW"
        elif i.region == frozenset(sig.lifelines):
            label = "loopP"
        else:
            label = f"loopC({','.join(_ordered(i.region, sig))})"
        return _wrap(label, [i.child], sig, indent, level)
    label, same = _head(i, sig)
    items = [i.left]
    t = i.right
    while same(t):
        items.append(t.left)
        t = t.right
    items.append(t)
    return _wrap(label, items, sig, indent, level)


def _wrap(label, items, sig, indent, level) -> str:
    if indent is None:
        return label + "(" + ",".join(_emit(x, sig, None, 0) for x in items) + ")"
    pad = " " * (indent * (level + 1))
    inner = (",\n").join(pad + _emit(x, sig, indent, level + 1) for x in items)
    return label + "(\n" + inner + "\n" + " " * (indent * level) + ")"


# ---------------------------------------------------------------------------
# multi-traces


def parse_htf(text: str, sig: Signature, partition: Optional[Partition] = None) -> MultiTrace:
    p = _Parser(text)
    groups: list = []
    traces: list = []
    while p.tok.kind != "eof":
        start = p.expect("[")
        coloc = None
        if p.tok.kind == "keyword":
            kw = p.tok
            p.k += 1
            if kw.text not in ("#all", "#any"):
                p.error(f"unknown keyword {kw.text!r}", "'#all' or '#any'", tok=kw)
            coloc = kw.text
        else:
            names = [_lifeline(p, sig)]
            while p.accept(","):
                names.append(_lifeline(p, sig))
            coloc = names
        p.expect("]")
        trace = []
        if p.tok.kind == "id":
            trace.append(_trace_action(p, sig))
            while p.accept("."):
                trace.append(_trace_action(p, sig))
        if coloc == "#all":
            members = set(sig.lifelines)
        elif coloc == "#any":
            members = {a.lifeline for a, _ in trace}
            if not members:
                p.error("[#any] needs at least one action to infer its lifelines", tok=start)
        else:
            members = set(coloc)
        for a, tok in trace:
            if a.lifeline not in members:
                p.error(f"action {a} lies outside its co-localization", tok=tok)
        for g, _ in groups:
            if g & members:
                p.error(f"co-localizations overlap on {sorted(g & members)}", tok=start)
        groups.append((frozenset(members), start))
        traces.append(tuple(a for a, _ in trace))
        if not p.accept(";"):
            break
    p.end()
    covered = set().union(*(g for g, _ in groups)) if groups else set()
    colocs = [g for g, _ in groups]
    for l in sig.lifelines:
        if l not in covered:
            colocs.append(frozenset([l]))
            traces.append(())
    parsed = Partition(tuple(colocs))
    mu = MultiTrace(parsed, tuple(traces))
    if partition is None:
        return mu
    if not parsed.same_groups(partition):
        raise ParseError(f"multi-trace partition {parsed} differs from {partition}", 1, 1)
    return MultiTrace(partition, tuple(mu.component(c) for c in partition.colocs))


def _trace_action(p: _Parser, sig: Signature):
    start = p.tok
    l = _lifeline(p, sig)
    if p.accept("!"):
        kind = Kind.EMIT
    elif p.accept("?"):
        kind = Kind.RECEIVE
    else:
        p.error(f"unexpected {p._describe()}", "'!' or '?'")
    return Action(l, kind, _message(p, sig)), start


def serialize_htf(mu: MultiTrace, sig: Optional[Signature] = None) -> str:
    parts = []
    for c, t in zip(mu.partition.colocs, mu.components):
        names = _ordered(c, sig) if sig else sorted(c)
        text = "[" + ",".join(names) + "]"
        if t:
            text += " " + ".".join(str(a) for a in t)
        parts.append(text)
    return ";\n".join(parts)


# ---------------------------------------------------------------------------
# configurations


@dataclass(frozen=True)
class GraphicLogger:
    format: str = "svg"  # svg | png
    orientation: str = "vertical"  # vertical | horizontal


PartitionSpec = Union[str, tuple]  # "discrete" | "trivial" | tuple of lifeline tuples


@dataclass(frozen=True)
class TraceGenLoggerSpec:
    generation: str = "exact"  # exact | prefix | terminal
    partition: PartitionSpec = "trivial"

    def resolve(self, sig: Signature) -> Partition:
        if self.partition == "trivial":
            return Partition.trivial(sig.lifelines)
        if self.partition == "discrete":
            return Partition.discrete(sig.lifelines)
        part = Partition.of(*self.partition)
        if part.lifelines != sig.all_lifelines:
            raise PartitionError(f"partition {part} does not cover the lifelines of the signature")
        return part


Priority = Union[str, tuple]  # "random" | ((key, weight), ...)

_EXPLORE_PRIORITY_KEYS = ("emission", "reception", "loop")
_ANALYZE_PRIORITY_KEYS = ("emission", "reception", "loop", "simu")


@dataclass(frozen=True)
class ExploreOptions:
    loggers: tuple = ()
    strategy: str = "DFS"
    max_depth: Optional[int] = None
    max_loop_depth: Optional[int] = None
    max_node_number: Optional[int] = None
    priorities: Priority = ()

    def to_config(self, seed: int = 0) -> ExploreConfig:
        if self.priorities == "random":
            pri = "random"
        elif self.priorities:
            pri = Priorities(**dict(self.priorities))
        else:
            pri = "lexicographic"
        return ExploreConfig(
            strategy=self.strategy,
            max_depth=self.max_depth,
            max_loop_instantiations=self.max_loop_depth,
            max_node_number=self.max_node_number,
            priorities=pri,
            seed=seed,
        )


@dataclass(frozen=True)
class AnalyzeOptions:
    loggers: tuple = ()
    kind: str = "simulate"
    before: bool = True
    loop: Union[str, int] = "depth"  # depth | count | n
    act: Union[str, int] = "outside"  # outside | n
    reset: bool = True
    multiply: bool = False
    strategy: str = "DFS"
    priorities: Priority = ()
    goal: Optional[Verdict] = Verdict.WEAK_PASS

    def to_config(self) -> AnalysisConfig:
        weights = dict(self.priorities) if isinstance(self.priorities, tuple) else {}
        return AnalysisConfig(
            kind=self.kind,
            policy=LoopActPolicy(self.loop, self.act, self.multiply, self.reset, self.before),
            strategy=self.strategy,
            priorities=AnalysisPriorities(**weights),
            goal=self.goal,
            graphic=any(isinstance(lg, GraphicLogger) for lg in self.loggers),
        )


@dataclass(frozen=True)
class ConfigFile:
    explore: ExploreOptions = field(default_factory=ExploreOptions)
    analyze: AnalyzeOptions = field(default_factory=AnalyzeOptions)


def parse_hcf(text: str) -> ConfigFile:
    p = _Parser(text)
    sections: dict = {}
    while p.tok.kind != "eof":
        head = p.tok
        if head.kind != "section" or head.text not in ("@explore_option", "@analyze_option"):
            p.error(f"unexpected {p._describe()}", "'@explore_option' or '@analyze_option'")
        p.k += 1
        if head.text in sections:
            p.error(f"duplicate {head.text} section", tok=head)
        p.expect("{")
        if head.text == "@explore_option":
            sections[head.text] = _explore_section(p)
        else:
            sections[head.text] = _analyze_section(p)
        p.expect("}")
    return ConfigFile(
        sections.get("@explore_option", ExploreOptions()),
        sections.get("@analyze_option", AnalyzeOptions()),
    )


def _options(p: _Parser, handlers: dict) -> dict:
    seen: dict = {}
    while not p.at("}"):
        key = p.ident("option name")
        if key.text not in handlers:
            p.error(f"unknown option {key.text!r}", " or ".join(repr(k) for k in handlers), tok=key)
        if key.text in seen:
            p.error(f"option {key.text!r} given twice", tok=key)
        p.expect("=")
        seen[key.text] = handlers[key.text](p)
        if not p.accept(";"):
            break
    return seen


def _choice(p: _Parser, choices) -> str:
    t = p.ident(" or ".join(repr(c) for c in choices))
    if t.text not in choices:
        p.error(f"invalid value {t.text!r}", " or ".join(repr(c) for c in choices), tok=t)
    return t.text


def _boolean(p: _Parser) -> bool:
    return _choice(p, ("true", "false")) == "true"


def _natural(p: _Parser) -> int:
    t = p.tok
    n = p.integer()
    if n < 0:
        p.error("expected a non-negative integer", tok=t)
    return n


def _bracketed(p: _Parser, item):
    p.expect("[")
    out = []
    if not p.at("]"):
        out.append(item(p))
        while p.accept(","):
            out.append(item(p))
    p.expect("]")
    return out


def _keyed(p: _Parser, handlers: dict) -> dict:
    def one(p):
        key = p.ident("key")
        if key.text not in handlers:
            p.error(f"unknown key {key.text!r}", " or ".join(repr(k) for k in handlers), tok=key)
        p.expect("=")
        return key, handlers[key.text](p)

    out: dict = {}
    for key, value in _bracketed(p, one):
        if key.text in out:
            p.error(f"key {key.text!r} given twice", tok=key)
        out[key.text] = value
    return out


def _priorities(keys):
    def parse(p: _Parser):
        if p.tok.kind == "id" and p.tok.text == "random":
            p.k += 1
            return "random"
        got = _keyed(p, {k: _Parser.integer for k in keys})
        return tuple((k, got[k]) for k in keys if k in got)

    return parse


def _graphic(p: _Parser) -> GraphicLogger:
    fmt, orient = "svg", "vertical"
    if p.at("["):
        seen = set()

        def item(p):
            return p.ident("'svg', 'png', 'vertical' or 'horizontal'")

        for t in _bracketed(p, item):
            if t.text in ("svg", "png"):
                fmt = t.text
                kind = "format"
            elif t.text in ("vertical", "horizontal"):
                orient = t.text
                kind = "orientation"
            else:
                p.error(f"invalid graphic option {t.text!r}", "'svg', 'png', 'vertical' or 'horizontal'", tok=t)
            if kind in seen:
                p.error(f"graphic {kind} given twice", tok=t)
            seen.add(kind)
    return GraphicLogger(fmt, orient)


def _partition_spec(p: _Parser) -> PartitionSpec:
    if p.tok.kind == "id":
        return _choice(p, ("discrete", "trivial"))
    p.expect("{")
    groups = []
    while True:
        p.expect("(")
        names = [p.ident("lifeline").text]
        while p.accept(","):
            names.append(p.ident("lifeline").text)
        p.expect(")")
        groups.append(tuple(names))
        if not p.accept(","):
            break
    p.expect("}")
    return tuple(groups)


def _tracegen(p: _Parser) -> TraceGenLoggerSpec:
    if not p.at("["):
        return TraceGenLoggerSpec()
    got = _keyed(p, {
        "generation": lambda p: _choice(p, ("exact", "prefix", "terminal")),
        "partition": _partition_spec,
    })
    return TraceGenLoggerSpec(got.get("generation", "exact"), got.get("partition", "trivial"))


def _loggers(allowed):
    def item(p: _Parser):
        t = p.ident(" or ".join(repr(a) for a in allowed))
        if t.text not in allowed:
            p.error(f"unknown logger {t.text!r}", " or ".join(repr(a) for a in allowed), tok=t)
        return _graphic(p) if t.text == "graphic" else _tracegen(p)

    return lambda p: tuple(_bracketed(p, item))


def _explore_section(p: _Parser) -> ExploreOptions:
    got = _options(p, {
        "loggers": _loggers(("graphic", "tracegen")),
        "strategy": lambda p: _choice(p, ("BFS", "DFS", "HCS")),
        "filters": lambda p: _keyed(p, {
            "max_depth": _natural,
            "max_loop_depth": _natural,
            "max_node_number": _natural,
        }),
        "priorities": _priorities(_EXPLORE_PRIORITY_KEYS),
    })
    filters = got.pop("filters", {})
    return ExploreOptions(**got, **filters)


def _analysis_kind(p: _Parser) -> dict:
    kind = _choice(p, ("accept", "prefix", "simulate"))
    out: dict = {"kind": kind}
    if not p.at("["):
        return out
    seen = set()

    def item(p: _Parser):
        key = p.ident("'before', 'loop', 'act', 'reset' or 'multiply'")
        if key.text in seen:
            p.error(f"option {key.text!r} given twice", tok=key)
        seen.add(key.text)
        if key.text in ("before", "reset", "multiply"):
            p.expect("=")
            out[key.text] = _boolean(p)
        elif key.text == "loop":
            if p.accept("max"):
                out["loop"] = {"depth": "depth", "num": "count"}[_choice(p, ("depth", "num"))]
            else:
                p.expect("num")
                p.expect("=")
                out["loop"] = _natural(p)
        elif key.text == "act":
            if p.accept("max"):
                p.expect("num")
                out["act"] = "outside"
            else:
                p.expect("num")
                p.expect("=")
                out["act"] = _natural(p)
        else:
            p.error(f"unknown option {key.text!r}", "'before', 'loop', 'act', 'reset' or 'multiply'", tok=key)

    _bracketed(p, item)
    return out


def _goal(p: _Parser) -> Optional[Verdict]:
    choice = _choice(p, ("Pass", "WeakPass", "WeakFail", "None"))
    return None if choice == "None" else Verdict.parse(choice)


def _analyze_section(p: _Parser) -> AnalyzeOptions:
    got = _options(p, {
        "loggers": _loggers(("graphic",)),
        "analysis_kind": _analysis_kind,
        "strategy": lambda p: _choice(p, ("BFS", "DFS", "HCS")),
        "priorities": _priorities(_ANALYZE_PRIORITY_KEYS),
        "goal": _goal,
    })
    kind = got.pop("analysis_kind", {})
    return AnalyzeOptions(**got, **kind)


def _fmt_priorities(pri: Priority) -> str:
    if pri == "random":
        return "random"
    return "[" + ", ".join(f"{k} = {v}" for k, v in pri) + "]"


def _fmt_logger(lg) -> str:
    if isinstance(lg, GraphicLogger):
        return f"graphic[{lg.format},{lg.orientation}]"
    part = lg.partition
    if not isinstance(part, str):
        part = "{" + ",".join("(" + ",".join(g) + ")" for g in part) + "}"
    return f"tracegen[generation = {lg.generation}, partition = {part}]"


def serialize_hcf(cfg: ConfigFile) -> str:
    e, a = cfg.explore, cfg.analyze
    filters = [
        f"{k} = {v}"
        for k, v in (("max_depth", e.max_depth), ("max_loop_depth", e.max_loop_depth), ("max_node_number", e.max_node_number))
        if v is not None
    ]
    explore = [
        "loggers = [" + ", ".join(_fmt_logger(lg) for lg in e.loggers) + "]",
        f"strategy = {e.strategy}",
        "filters = [" + ", ".join(filters) + "]",
        f"priorities = {_fmt_priorities(e.priorities)}",
    ]
    loop = {"depth": "loop max depth", "count": "loop max num"}.get(a.loop, f"loop num = {a.loop}")
    act = "act max num" if a.act == "outside" else f"act num = {a.act}"
    kind = a.kind
    defaults = AnalyzeOptions()
    custom = any(getattr(a, k) != getattr(defaults, k) for k in ("before", "loop", "act", "reset", "multiply"))
    if kind == "simulate" or custom:
        flags = ", ".join([
            f"before = {str(a.before).lower()}",
            loop,
            f"reset = {str(a.reset).lower()}",
            f"multiply = {str(a.multiply).lower()}",
            act,
        ])
        kind += f"[{flags}]"
    analyze = [
        "loggers = [" + ", ".join(_fmt_logger(lg) for lg in a.loggers) + "]",
        f"analysis_kind = {kind}",
        f"strategy = {a.strategy}",
        f"priorities = {_fmt_priorities(a.priorities)}",
        f"goal = {a.goal.value if a.goal else 'None'}",
    ]
    return (
        "@explore_option{\n  " + ";\n  ".join(explore) + "\n}\n"
        "@analyze_option{\n  " + ";\n  ".join(analyze) + "\n}\n"
    )
