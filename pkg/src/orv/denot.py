"""Denotational trace-set semantics, used as a brute-force oracle.

Everything here works on global traces (tuples of actions) and
materializes sets eagerly, so it is only meant for small interactions.
Loops are truncated in one of two ways:

``power``
    every Kleene closure is cut at ``loop_bound`` repetitions;
``instances``
    the whole derivation may use at most ``loop_bound`` non-empty loop
    instances, counted over all closures and nesting levels.  This is
    the budget the exploration filter ``max_loop_instantiations`` counts.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterable, Optional

from .ir import Act, Alt, Coreg, Empty, Interaction, LoopC, LoopS, Strict
from .traces import MultiTrace, is_slice

DEFAULT_CAP = 10**6


class OracleTooLarge(RuntimeError):
    pass


def conflict(t, lifeline: str, region) -> bool:
    """Whether ``t`` holds an action on ``lifeline`` outside ``region``."""
    if lifeline in region:
        return False
    return any(a.lifeline == lifeline for a in t)


def cond_seq(t1, t2, region) -> frozenset:
    """Conditional sequencing of two traces w.r.t. a concurrent region."""
    return _cond_seq(tuple(t1), tuple(t2), frozenset(region))


@lru_cache(maxsize=1 << 16)
def _cond_seq(t1, t2, region):
    if not t1:
        return frozenset((t2,))
    if not t2:
        return frozenset((t1,))
    out = {(t1[0],) + t for t in _cond_seq(t1[1:], t2, region)}
    if not conflict(t1, t2[0].lifeline, region):
        out |= {(t2[0],) + t for t in _cond_seq(t1, t2[1:], region)}
    return frozenset(out)


def interleave(t1, t2) -> frozenset:
    lifelines = {a.lifeline for a in t1} | {a.lifeline for a in t2}
    return cond_seq(t1, t2, lifelines)


def weak_seq(t1, t2) -> frozenset:
    return cond_seq(t1, t2, ())


def strict_seq(t1, t2) -> frozenset:
    return frozenset((tuple(t1) + tuple(t2),))


def lift(op: Callable, T1: Iterable, T2: Iterable, cap: int = DEFAULT_CAP) -> frozenset:
    """Extend a trace-level operator to sets of traces."""
    out: set = set()
    T2 = list(T2)
    for t1 in T1:
        for t2 in T2:
            out |= op(t1, t2)
            if len(out) > cap:
                raise OracleTooLarge(f"trace set exceeds {cap} elements")
    return frozenset(out)


def coreg_op(region) -> Callable:
    region = frozenset(region)
    return lambda t1, t2: _cond_seq(tuple(t1), tuple(t2), region)


def kleene(T: Iterable, op: Callable, max_power: int, cap: int = DEFAULT_CAP) -> frozenset:
    """Union of ``T`` composed with itself 0..``max_power`` times."""
    T = frozenset(T)
    power = frozenset({()})
    out = set(power)
    for _ in range(max_power):
        power = lift(op, T, power, cap)
        if power <= out:
            break
        out |= power
        if len(out) > cap:
            raise OracleTooLarge(f"trace set exceeds {cap} elements")
    return frozenset(out)


def rho(i: Interaction, loop_bound: int, mode: str = "power", cap: int = DEFAULT_CAP, max_length: Optional[int] = None) -> frozenset:
    """Bounded denotational semantics of ``i`` as a set of global traces.

    ``max_length`` (instances mode only) keeps traces up to that length;
    since every operator only lengthens traces this is exact for them.
    """
    if mode == "power":
        if max_length is not None:
            raise ValueError("max_length needs the instances mode")
        return _rho_power(i, loop_bound, cap)
    if mode == "instances":
        return frozenset(rho_costed(i, loop_bound, cap, max_length))
    raise ValueError(f"unknown truncation mode {mode!r}")


def _rho_power(i, k, cap):
    if isinstance(i, Empty):
        return frozenset({()})
    if isinstance(i, Act):
        return frozenset({(i.action,)})
    if isinstance(i, Alt):
        return _rho_power(i.left, k, cap) | _rho_power(i.right, k, cap)
    if isinstance(i, Strict):
        return lift(strict_seq, _rho_power(i.left, k, cap), _rho_power(i.right, k, cap), cap)
    if isinstance(i, Coreg):
        return lift(coreg_op(i.region), _rho_power(i.left, k, cap), _rho_power(i.right, k, cap), cap)
    if isinstance(i, LoopS):
        return kleene(_rho_power(i.child, k, cap), strict_seq, k, cap)
    if isinstance(i, LoopC):
        return kleene(_rho_power(i.child, k, cap), coreg_op(i.region), k, cap)
    raise TypeError(f"not an interaction: {i!r}")


def rho_costed(i: Interaction, budget: int, cap: int = DEFAULT_CAP, max_length: Optional[int] = None) -> dict:
    """Map each trace of ``i`` to the least number of non-empty loop
    instances needed to derive it, keeping those within ``budget``
    (and no longer than ``max_length`` when given)."""
    n = max_length if max_length is not None else float("inf")
    return _costed(i, budget, cap, n)


def _costed(i, budget, cap, n) -> dict:
    if isinstance(i, Empty):
        return {(): 0}
    if isinstance(i, Act):
        return {(i.action,): 0} if n >= 1 else {}
    if isinstance(i, Alt):
        out = dict(_costed(i.left, budget, cap, n))
        for t, c in _costed(i.right, budget, cap, n).items():
            if c < out.get(t, budget + 1):
                out[t] = c
        return out
    if isinstance(i, (Strict, Coreg)):
        op = strict_seq if isinstance(i, Strict) else coreg_op(i.region)
        return _combine(_costed(i.left, budget, cap, n), _costed(i.right, budget, cap, n), op, budget, cap, n)
    if isinstance(i, (LoopS, LoopC)):
        op = strict_seq if isinstance(i, LoopS) else coreg_op(i.region)
        body = {t: c + 1 for t, c in _costed(i.child, budget, cap, n).items() if t and c + 1 <= budget}
        out = {(): 0}
        frontier = {(): 0}
        while frontier:
            frontier = _combine(body, frontier, op, budget, cap, n)
            frontier = {t: c for t, c in frontier.items() if c < out.get(t, budget + 1)}
            out.update(frontier)
            if len(out) > cap:
                raise OracleTooLarge(f"trace set exceeds {cap} elements")
        return out
    raise TypeError(f"not an interaction: {i!r}")


def _combine(left: dict, right: dict, op, budget, cap, n=float("inf")) -> dict:
    out: dict = {}
    for t1, c1 in left.items():
        for t2, c2 in right.items():
            c = c1 + c2
            if c > budget or len(t1) + len(t2) > n:
                continue
            for t in op(t1, t2):
                if c < out.get(t, budget + 1):
                    out[t] = c
        if len(out) > cap:
            raise OracleTooLarge(f"trace set exceeds {cap} elements")
    return out


@lru_cache(maxsize=1 << 14)
def min_trace_length(i: Interaction) -> int:
    """Length of the shortest trace of ``i`` (loops iterate zero times)."""
    if isinstance(i, Empty):
        return 0
    if isinstance(i, Act):
        return 1
    if isinstance(i, Alt):
        return min(min_trace_length(i.left), min_trace_length(i.right))
    if isinstance(i, (Strict, Coreg)):
        # concatenation is always one of the allowed schedulings
        return min_trace_length(i.left) + min_trace_length(i.right)
    return 0


def oracle_slice_membership(
    i: Interaction,
    mu: MultiTrace,
    loop_bound: int,
    mode: str = "power",
    cap: int = DEFAULT_CAP,
    max_length: Optional[int] = None,
) -> bool:
    """Brute force: is ``mu`` a slice of the projection of a bounded trace of ``i``?"""
    if mu.is_empty:
        return True
    for t in rho(i, loop_bound, mode, cap, max_length):
        if is_slice(mu, MultiTrace.from_global(t, mu.partition)):
            return True
    return False


class SliceOracle:
    """Reusable projected trace set for many slice queries on one interaction."""

    def __init__(self, i: Interaction, partition, loop_bound: int, mode: str = "power", cap: int = DEFAULT_CAP, max_length=None):
        self.partition = partition
        self.accepted = {MultiTrace.from_global(t, partition) for t in rho(i, loop_bound, mode, cap, max_length)}

    def is_accepted(self, mu: MultiTrace) -> bool:
        return mu in self.accepted

    def is_slice(self, mu: MultiTrace) -> bool:
        if mu.is_empty:
            return True
        return any(is_slice(mu, full) for full in self.accepted if len(full) >= len(mu))
