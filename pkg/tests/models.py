"""Shared interactions, multi-traces and generators for the test suite."""
from __future__ import annotations

import random
from pathlib import Path

from hypothesis import strategies as st

from orv.ir import (
    EMPTY,
    Act,
    Alt,
    Coreg,
    LoopC,
    LoopS,
    Signature,
    Strict,
    emit,
    loop_p,
    loop_w,
    message_passing,
    receive,
    seq,
    coreg,
    act,
)
from orv.traces import MultiTrace, Partition

DATA = Path(__file__).parent / "data"

L3 = ("l1", "l2", "l3")
SIG3 = Signature(L3, ("m1", "m2", "m3", "m4", "m5"))

# the running example: optional broadcast, a weak loop of alternatives, then a parallel loop
I3 = seq(
    coreg(
        ["l2"],
        Alt(message_passing("l1", "m1", "l2", "l3"), EMPTY),
        loop_w(Alt(message_passing("l1", "m2", "l2"), message_passing("l2", "m3", "l3"))),
    ),
    loop_p(seq(message_passing("l3", "m4", "l2"), message_passing("l2", "m5", "l3")), L3),
)
C = Partition.of(["l1", "l2"], ["l3"])
MU_FULL = MultiTrace(
    C,
    (
        (emit("l1", "m1"), receive("l2", "m1"), receive("l2", "m4")),
        (receive("l3", "m1"), emit("l3", "m4")),
    ),
)
MU_SLICE = MultiTrace(C, ((receive("l2", "m4"),), (receive("l3", "m1"),)))

# three slices the default measure cannot recognize
NEG_A = (
    loop_p(seq(act(emit("l", "m1")), act(receive("l", "m2"))), ["l"]),
    MultiTrace(Partition.of(["l"]), ((receive("l", "m2"),) * 3,)),
)
NEG_B = (
    loop_w(Strict(act(emit("l1", "m1")), act(receive("l2", "m1")))),
    MultiTrace(Partition.of(["l1", "l2"]), ((receive("l2", "m1"),) * 2,)),
)
NEG_C = (
    coreg(["l2"], loop_w(message_passing("l1", "m1", "l2")), loop_w(message_passing("l1", "m2", "l2"))),
    MultiTrace(Partition.of(["l1"], ["l2"]), ((), (receive("l2", "m2"), receive("l2", "m1")))),
)

SMALL_SIG = Signature(L3, ("m1", "m2", "m3"))


# ---------------------------------------------------------------------------
# random interactions


def random_interaction(rng: random.Random, max_actions: int = 6, max_loops: int = 2, sig: Signature = SMALL_SIG):
    budget = {"acts": rng.randint(1, max_actions), "loops": max_loops}

    def action():
        budget["acts"] -= 1
        l = rng.choice(sig.lifelines)
        m = rng.choice(sig.messages)
        return Act(emit(l, m) if rng.random() < 0.5 else receive(l, m))

    def region():
        return frozenset(l for l in sig.lifelines if rng.random() < 0.5)

    def term(depth):
        if budget["acts"] <= 0:
            return EMPTY
        r = rng.random()
        if depth >= 4 or r < 0.3:
            return action() if rng.random() < 0.9 else EMPTY
        if r < 0.42 and budget["loops"] > 0:
            budget["loops"] -= 1
            child = term(depth + 1)
            return LoopS(child) if rng.random() < 0.25 else LoopC(region(), child)
        left = term(depth + 1)
        right = term(depth + 1)
        op = rng.random()
        if op < 0.25:
            return Strict(left, right)
        if op < 0.5:
            return Alt(left, right)
        return Coreg(region(), left, right)

    return term(0)


def random_partition(rng: random.Random, lifelines=L3) -> Partition:
    choice = rng.randrange(3)
    if choice == 0:
        return Partition.trivial(lifelines)
    if choice == 1:
        return Partition.discrete(lifelines)
    ls = list(lifelines)
    rng.shuffle(ls)
    return Partition.of(ls[:2], ls[2:])


def interactions(max_actions: int = 6, max_loops: int = 2):
    """Hypothesis strategy over small random interactions."""
    return st.randoms(use_true_random=False).map(lambda r: random_interaction(r, max_actions, max_loops))


@st.composite
def multitraces(draw, sig: Signature = SMALL_SIG, max_len: int = 4):
    part = draw(st.sampled_from([Partition.trivial(sig.lifelines), Partition.discrete(sig.lifelines), C]))
    comps = []
    for coloc in part.colocs:
        acts = st.builds(
            lambda l, k, m: emit(l, m) if k else receive(l, m),
            st.sampled_from(sorted(coloc)),
            st.booleans(),
            st.sampled_from(sig.messages),
        )
        comps.append(tuple(draw(st.lists(acts, max_size=max_len))))
    return MultiTrace(part, tuple(comps))
