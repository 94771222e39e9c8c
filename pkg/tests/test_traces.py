import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from models import C, MU_FULL, MU_SLICE, SMALL_SIG, multitraces
from orv.ir import emit, receive
from orv.traces import (
    MultiTrace,
    MutationError,
    Partition,
    PartitionError,
    flag_started,
    format_trace,
    is_slice,
    is_subword,
    mutate_insert_action,
    mutate_swap_actions,
    mutate_swap_components,
    no_flags,
    random_wide_slice,
    slices_of,
    trace_slices,
)


def test_partition_checks():
    with pytest.raises(PartitionError):
        Partition.of(["l1"], ["l1", "l2"])
    with pytest.raises(PartitionError):
        Partition.of([])
    p = Partition.of(["l1", "l2"], ["l3"])
    assert p.index_of("l3") == 1
    assert Partition.discrete(["l1", "l2", "l3"]).refines(p)
    assert not p.refines(Partition.discrete(["l1", "l2", "l3"]))


def test_multitrace_from_global_and_project():
    t = (emit("l1", "m1"), receive("l3", "m1"), receive("l2", "m1"))
    mu = MultiTrace.from_global(t, C)
    assert mu.components == ((emit("l1", "m1"), receive("l2", "m1")), (receive("l3", "m1"),))
    fine = mu.project(Partition.discrete(["l1", "l2", "l3"]))
    assert fine.components == ((emit("l1", "m1"),), (receive("l2", "m1"),), (receive("l3", "m1"),))
    with pytest.raises(PartitionError):
        fine.project(C)


def test_component_membership_is_checked():
    with pytest.raises(PartitionError):
        MultiTrace(C, ((receive("l3", "m1"),), ()))


def test_length_and_tail():
    assert len(MU_FULL) == 5
    assert MU_FULL.tail(1).components[1] == (emit("l3", "m4"),)
    assert MultiTrace.empty(C).is_empty


def test_slice_of_running_example():
    assert is_slice(MU_SLICE, MU_FULL)
    assert MU_SLICE in slices_of(MU_FULL)
    # 4 slices of l3?m1.l3!m4 times 7 of the three-action component
    assert len(slices_of(MU_FULL)) == 4 * 7


def test_trace_slices_and_subword():
    assert trace_slices("abc") == {(), ("a",), ("b",), ("c",), ("a", "b"), ("b", "c"), ("a", "b", "c")}
    assert is_subword("bc", "abcd")
    assert not is_subword("ac", "abcd")


@given(multitraces(), st.randoms(use_true_random=False))
def test_random_wide_slice_is_a_slice(mu, rng):
    s = random_wide_slice(mu, rng)
    assert is_slice(s, mu)
    for a, b in zip(s.components, mu.components):
        assert 3 * len(a) >= len(b)


@given(multitraces(), st.randoms(use_true_random=False))
def test_mutants_keep_partition_and_shape(mu, rng):
    try:
        m = mutate_swap_actions(mu, rng)
    except MutationError:
        assert all(len(t) < 2 for t in mu.components)
    else:
        assert sorted(map(str, m.actions())) == sorted(map(str, mu.actions()))
    m = mutate_insert_action(mu, rng, SMALL_SIG)
    assert len(m) == len(mu) + 1 and m.partition == mu.partition


def test_swap_components():
    other = MultiTrace(C, ((), (receive("l3", "m9"),)))
    m = mutate_swap_components(MU_FULL, other, ["l3"])
    assert m.components == (MU_FULL.components[0], (receive("l3", "m9"),))


def test_flags():
    f = no_flags(C)
    assert f == (False, False)
    assert flag_started(f, 1) == (False, True)


def test_format_trace():
    assert format_trace(()) == "ε"
    assert format_trace((emit("l1", "m"), receive("l2", "m"))) == "l1!m.l2?m"


def test_insert_needs_messages():
    from orv.ir import Signature

    with pytest.raises(MutationError):
        mutate_insert_action(MU_FULL, random.Random(0), Signature(("l1", "l2", "l3"), ()))
