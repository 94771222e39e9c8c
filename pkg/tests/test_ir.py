import pytest
from hypothesis import given

from models import I3, interactions
from orv.ir import (
    EMPTY,
    Act,
    Alt,
    Coreg,
    InvalidPosition,
    LoopC,
    LoopS,
    Signature,
    Strict,
    actions_outside_loops,
    check_interaction,
    emit,
    format_position,
    iter_positions,
    loop_count,
    loop_depth_at,
    max_loop_depth,
    message_passing,
    nary,
    par,
    parse_position,
    receive,
    seq,
    sub_at,
    term_size,
)


def test_running_example_measures():
    assert term_size(I3) == 25
    assert max_loop_depth(I3) == 1
    assert actions_outside_loops(I3) == 3
    assert loop_count(I3) == 2


def test_positions_address_subterms():
    assert sub_at(I3, (1, 1, 1, 1)) == Act(emit("l1", "m1"))
    assert isinstance(sub_at(I3, (2,)), LoopC)
    assert loop_depth_at(I3, (2, 1, 1, 1)) == 1
    assert loop_depth_at(I3, (1, 1, 1, 1)) == 0
    with pytest.raises(InvalidPosition):
        sub_at(I3, (1, 1, 1, 1, 1))


@pytest.mark.parametrize("p", [(), (1,), (2, 1, 2)])
def test_position_text_roundtrip(p):
    assert parse_position(format_position(p)) == p


def test_parse_position_rejects_digits():
    with pytest.raises(ValueError):
        parse_position("13")


def test_sugar():
    a, b = Act(emit("l1", "m")), Act(receive("l2", "m"))
    assert seq(a, b) == Coreg(frozenset(), a, b)
    assert par(a, b, ["l1", "l2"]).region == {"l1", "l2"}
    assert message_passing("l1", "m", "l2") == Strict(a, b)
    assert nary(seq, [a, b, EMPTY]) == seq(a, seq(b, EMPTY))
    with pytest.raises(ValueError):
        nary(seq, [])


def test_nested_loops_depth():
    i = LoopS(Alt(LoopC(frozenset(), Act(emit("l", "m"))), EMPTY))
    assert max_loop_depth(i) == 2
    assert loop_depth_at(i, (1, 1, 1)) == 2
    assert actions_outside_loops(i) == 0


def test_terms_are_hashable_values():
    a = Strict(Act(emit("l1", "m")), EMPTY)
    b = Strict(Act(emit("l1", "m")), EMPTY)
    assert a == b and hash(a) == hash(b)
    assert len({a, b}) == 1


def test_signature_validation():
    with pytest.raises(ValueError, match="duplicate"):
        Signature(("l1", "l1"), ("m",))
    sig = Signature(("l1",), ("m",))
    with pytest.raises(ValueError, match="undeclared"):
        check_interaction(Act(emit("l2", "m")), sig)
    with pytest.raises(ValueError, match="region"):
        check_interaction(LoopC(frozenset({"zz"}), EMPTY), sig)


@given(interactions())
def test_preorder_walk_visits_every_position_once(i):
    ps = [p for p, _ in iter_positions(i)]
    assert len(ps) == len(set(ps)) == term_size(i)
    assert ps[0] == ()
    for p in ps:
        sub_at(i, p)
