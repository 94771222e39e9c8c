import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from models import C, I3, MU_FULL, MU_SLICE, interactions
from orv.denot import (
    OracleTooLarge,
    SliceOracle,
    cond_seq,
    interleave,
    kleene,
    min_trace_length,
    oracle_slice_membership,
    rho,
    rho_costed,
    strict_seq,
    weak_seq,
)
from orv.ir import EMPTY, Act, LoopC, LoopS, Strict, emit, receive, seq

a1, b1 = emit("l1", "m"), receive("l2", "m")
a2 = emit("l1", "n")


def test_weak_sequencing_orders_same_lifeline_only():
    assert weak_seq((a1,), (b1,)) == {(a1, b1), (b1, a1)}
    assert weak_seq((a1,), (a2,)) == {(a1, a2)}
    assert cond_seq((a1,), (a2,), {"l1"}) == {(a1, a2), (a2, a1)}
    assert interleave((a1,), (a2,)) == {(a1, a2), (a2, a1)}
    assert strict_seq((b1,), (a1,)) == {(b1, a1)}


def test_kleene_powers():
    closure = kleene({(a1,)}, strict_seq, 3)
    assert closure == {(), (a1,), (a1, a1), (a1, a1, a1)}


def test_cap_guard():
    with pytest.raises(OracleTooLarge):
        rho(LoopC(frozenset({"l1", "l2"}), seq(Act(a1), Act(b1))), 6, cap=100)


def test_power_and_instance_truncation_differ_on_nested_loops():
    i = LoopS(LoopS(Act(a1)))
    # power mode allows 2 outer iterations of up to 2 inner ones
    assert (a1,) * 4 in rho(i, 2, mode="power")
    assert (a1,) * 4 not in rho(i, 2, mode="instances")


def test_costs_count_nested_instances():
    i = LoopS(Strict(Act(a1), LoopS(Act(b1))))
    costs = rho_costed(i, 4)
    assert costs[()] == 0
    assert costs[(a1,)] == 1
    assert costs[(a1, b1)] == 2
    assert costs[(a1, b1, a1)] == 3


def test_max_length_filters_exactly():
    full = rho(I3, 2, mode="instances")
    short = rho(I3, 2, mode="instances", max_length=4)
    assert short == {t for t in full if len(t) <= 4}


def test_running_example_slices():
    assert oracle_slice_membership(I3, MU_SLICE, 1, mode="instances")
    assert oracle_slice_membership(I3, MU_FULL, 1, mode="instances")
    oracle = SliceOracle(I3, C, 1, mode="instances")
    assert not oracle.is_accepted(MU_FULL)
    assert oracle.is_slice(MU_SLICE)


def test_min_trace_length():
    assert min_trace_length(I3) == 0
    assert min_trace_length(Strict(Act(a1), LoopS(Act(b1)))) == 1
    assert min_trace_length(EMPTY) == 0


@settings(deadline=None, max_examples=60)
@given(interactions(), st.integers(0, 2))
def test_min_trace_length_matches_enumeration(i, k):
    assert min_trace_length(i) == min(len(t) for t in rho(i, k, mode="instances"))


@settings(deadline=None, max_examples=60)
@given(interactions(), st.integers(0, 2))
def test_budget_monotone(i, k):
    assert rho(i, k, mode="instances") <= rho(i, k + 1, mode="instances")
