import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from models import C, DATA, I3, MU_FULL, MU_SLICE, SIG3, SMALL_SIG, interactions, multitraces
from orv.engine import Verdict
from orv.formats import (
    AnalyzeOptions,
    ConfigFile,
    ExploreOptions,
    GraphicLogger,
    ParseError,
    TraceGenLoggerSpec,
    parse_hcf,
    parse_hif,
    parse_hsf,
    parse_htf,
    serialize_hcf,
    serialize_hif,
    serialize_hsf,
    serialize_htf,
)
from orv.ir import EMPTY, Coreg, LoopC, Signature, act, emit, receive
from orv.traces import Partition

RESERVED = {"o", "seq", "par", "strict", "alt", "coreg", "loopS", "loopW", "loopP", "loopC"}

ident = st.from_regex(r"[a-z][a-z0-9_]{0,4}", fullmatch=True).filter(lambda s: s not in RESERVED)


def signatures():
    return st.builds(
        lambda ls, ms: Signature(tuple(ls), tuple(ms)),
        st.lists(ident, min_size=1, max_size=4, unique=True),
        st.lists(ident, min_size=1, max_size=4, unique=True),
    )


def _weights(keys):
    return st.lists(st.sampled_from(keys), unique=True).flatmap(
        lambda ks: st.tuples(*[st.tuples(st.just(k), st.integers(-5, 5)) for k in ks])
    ).map(lambda t: tuple(sorted(t, key=lambda kv: keys.index(kv[0]))))


_graphic = st.builds(GraphicLogger, st.sampled_from(["svg", "png"]), st.sampled_from(["vertical", "horizontal"]))
_tracegen = st.builds(
    TraceGenLoggerSpec,
    st.sampled_from(["exact", "prefix", "terminal"]),
    st.sampled_from(["trivial", "discrete", (("l1", "l2"), ("l3",)), (("l1",), ("l2",), ("l3",))]),
)
_opt_nat = st.one_of(st.none(), st.integers(0, 500))


def configs():
    explore = st.builds(
        ExploreOptions,
        loggers=st.lists(st.one_of(_graphic, _tracegen), max_size=2).map(tuple),
        strategy=st.sampled_from(["BFS", "DFS", "HCS"]),
        max_depth=_opt_nat,
        max_loop_depth=_opt_nat,
        max_node_number=_opt_nat,
        priorities=st.one_of(st.just("random"), _weights(["emission", "reception", "loop"])),
    )
    analyze = st.builds(
        AnalyzeOptions,
        loggers=st.lists(_graphic, max_size=1).map(tuple),
        kind=st.sampled_from(["accept", "prefix", "simulate"]),
        before=st.booleans(),
        loop=st.one_of(st.sampled_from(["depth", "count"]), st.integers(0, 9)),
        act=st.one_of(st.just("outside"), st.integers(0, 9)),
        reset=st.booleans(),
        multiply=st.booleans(),
        strategy=st.sampled_from(["BFS", "DFS", "HCS"]),
        priorities=st.one_of(st.just("random"), _weights(["emission", "reception", "loop", "simu"])),
        goal=st.sampled_from([None, Verdict.PASS, Verdict.WEAK_PASS, Verdict.WEAK_FAIL]),
    )
    return st.builds(ConfigFile, explore, analyze)


# ---------------------------------------------------------------------------
# verbatim files


def test_signature_file():
    assert parse_hsf((DATA / "signature.hsf").read_text()) == SIG3


def test_interaction_file_is_the_running_example():
    assert parse_hif((DATA / "interaction.hif").read_text(), SIG3) == I3


def test_multitrace_file_with_any_keyword():
    assert parse_htf((DATA / "full.htf").read_text(), SIG3, C) == MU_FULL


def test_slice_file():
    assert parse_htf((DATA / "slice.htf").read_text(), SIG3, C) == MU_SLICE


def test_explore_config_file():
    cfg = parse_hcf((DATA / "explore.hcf").read_text())
    e = cfg.explore
    assert e.strategy == "HCS"
    assert (e.max_depth, e.max_loop_depth, e.max_node_number) == (35, 4, 250)
    assert e.priorities == "random"
    assert e.loggers == (GraphicLogger("svg", "vertical"), TraceGenLoggerSpec("exact", (("l1", "l2"), ("l3",))))
    assert cfg.analyze == AnalyzeOptions()


def test_analyze_config_file():
    a = parse_hcf((DATA / "analyze.hcf").read_text()).analyze
    assert a.kind == "simulate"
    assert (a.before, a.loop, a.reset, a.multiply, a.act) == (True, "depth", True, False, 10)
    assert a.priorities == (("simu", -1),)
    assert a.goal is Verdict.WEAK_PASS
    assert a.to_config().policy.act_source == 10


def test_empty_config_is_default():
    assert parse_hcf("") == ConfigFile()


# ---------------------------------------------------------------------------
# round trips


@given(signatures())
def test_hsf_roundtrip(sig):
    assert parse_hsf(serialize_hsf(sig)) == sig


@settings(deadline=None)
@given(interactions(), st.sampled_from([None, 2]))
def test_hif_roundtrip(i, indent):
    assert parse_hif(serialize_hif(i, SMALL_SIG, indent=indent), SMALL_SIG) == i


@given(multitraces())
def test_htf_roundtrip(mu):
    assert parse_htf(serialize_htf(mu, SMALL_SIG), SMALL_SIG, mu.partition) == mu


@given(configs())
def test_hcf_roundtrip(cfg):
    assert parse_hcf(serialize_hcf(cfg)) == cfg


def test_region_names_full_signature_as_par():
    i = Coreg(frozenset(SMALL_SIG.lifelines), act(emit("l1", "m1")), act(receive("l2", "m1")))
    assert serialize_hif(i, SMALL_SIG).startswith("par(")
    j = LoopC(frozenset({"l1", "l3"}), EMPTY)
    assert serialize_hif(j, SMALL_SIG) == "loopC(l1,l3)(o)"


def test_broadcast_sugar():
    text = "l1 -- m1 -> (l2,l3)"
    i = parse_hif(text, SIG3)
    assert parse_hif(serialize_hif(i, SIG3), SIG3) == i
    assert "->" in serialize_hif(i, SIG3)


def test_unlisted_lifelines_get_empty_components():
    mu = parse_htf("[l1] l1!m1", SIG3)
    assert mu.partition == Partition.of(["l1"], ["l2"], ["l3"])
    assert mu.components == ((emit("l1", "m1"),), (), ())


def test_all_keyword():
    mu = parse_htf("[#all] l1!m1.l2?m1", SIG3)
    assert mu.partition == Partition.trivial(SIG3.lifelines)


# ---------------------------------------------------------------------------
# errors


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("@lifeline{ l1; l1 }", 1, 16),
        ("@message{ m1 }\n@oops{ }", 2, 1),
        ("@lifeline{ l1 ", 1, 15),
    ],
)
def test_hsf_error_positions(text, line, col):
    with pytest.raises(ParseError) as e:
        parse_hsf(text)
    assert (e.value.line, e.value.col) == (line, col)


def test_hif_unknown_lifeline():
    with pytest.raises(ParseError) as e:
        parse_hif("seq(\n  l1 -- m1 -> l9,\n  o)", SIG3)
    assert e.value.line == 2
    assert "l9" in str(e.value)


def test_hif_trailing_input():
    with pytest.raises(ParseError, match="end of input"):
        parse_hif("o o", SIG3)


def test_htf_action_outside_colocalization():
    with pytest.raises(ParseError, match="outside"):
        parse_htf("[l1] l2?m1", SIG3)


def test_htf_overlap():
    with pytest.raises(ParseError, match="overlap"):
        parse_htf("[l1,l2] l1!m1; [l2] l2?m1", SIG3)


def test_htf_empty_any():
    with pytest.raises(ParseError, match="#any"):
        parse_htf("[#any]", SIG3)


def test_htf_partition_mismatch():
    with pytest.raises(ParseError, match="differs"):
        parse_htf("[l1] l1!m1", SIG3, C)


def test_hcf_unknown_option():
    with pytest.raises(ParseError) as e:
        parse_hcf("@analyze_option{\n  colour = red\n}")
    assert (e.value.line, e.value.col) == (2, 3)
    assert "goal" in e.value.expected


def test_hcf_duplicate_option():
    with pytest.raises(ParseError, match="twice"):
        parse_hcf("@explore_option{ strategy = DFS; strategy = BFS }")


def test_hcf_bad_value():
    with pytest.raises(ParseError, match="invalid value"):
        parse_hcf("@explore_option{ strategy = sideways }")


def test_message_includes_location():
    with pytest.raises(ParseError) as e:
        parse_hsf("@lifeline{ 3 }")
    assert str(e.value).startswith("line 1, column 12")
