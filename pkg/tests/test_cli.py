import csv
import shutil

import pytest

from models import DATA
from orv.cli import main


@pytest.fixture
def files(tmp_path):
    for name in ("signature.hsf", "interaction.hif", "full.htf", "explore.hcf", "analyze.hcf", "slice.htf"):
        shutil.copy(DATA / name, tmp_path / name)
    return tmp_path


def test_draw(files, capsys):
    assert main(["draw", str(files / "signature.hsf"), str(files / "interaction.hif"), "-o", str(files / "out")]) == 0
    assert (files / "out" / "interaction.dot").read_text().startswith("digraph")
    assert "l1" in capsys.readouterr().out


def test_explore_with_tracegen(files, capsys):
    hcf = files / "gen.hcf"
    hcf.write_text("@explore_option{ loggers = [graphic, tracegen[partition = {(l1,l2),(l3)}]]; filters = [max_loop_depth = 1] }")
    code = main(["explore", str(files / "signature.hsf"), str(files / "interaction.hif"), str(hcf), "-o", str(files / "out")])
    assert code == 0
    out = capsys.readouterr().out
    assert "nodes:" in out
    assert list((files / "out" / "traces").glob("*.htf"))
    assert (files / "out" / "interaction_explore.dot").exists()


def test_explore_config_file(files, capsys):
    args = ["explore", str(files / "signature.hsf"), str(files / "interaction.hif"), str(files / "explore.hcf")]
    assert main(args + ["-o", str(files / "out"), "--seed", "3"]) == 0
    assert "nodes: 250" in capsys.readouterr().out


def test_analyze_exit_codes(files, capsys):
    base = [str(files / "signature.hsf"), str(files / "interaction.hif")]
    assert main(["analyze", *base, str(files / "full.htf")]) == 0
    assert "verdict: Pass" in capsys.readouterr().out
    assert main(["analyze", *base, str(files / "slice.htf"), str(files / "analyze.hcf"), "-o", str(files / "o")]) == 0
    assert "verdict: WeakPass" in capsys.readouterr().out
    accept = files / "accept.hcf"
    accept.write_text("@analyze_option{ analysis_kind = accept }")
    assert main(["analyze", *base, str(files / "slice.htf"), str(accept)]) == 1


def test_analyze_graph(files):
    base = [str(files / "signature.hsf"), str(files / "interaction.hif"), str(files / "slice.htf")]
    assert main(["analyze", *base, "--graph", "-o", str(files / "g")]) == 0
    assert "Ok" in (files / "g" / "slice_analysis.dot").read_text()


def test_parse_error_exit(files, capsys):
    bad = files / "bad.hif"
    bad.write_text("seq(l1 -- m1 -> l9, o)")
    assert main(["draw", str(files / "signature.hsf"), str(bad)]) == 2
    err = capsys.readouterr().err
    assert "line 1" in err and "l9" in err


def test_usage_errors(files, capsys):
    assert main([]) == 2
    assert main(["analyze", "x.hsf"]) == 2
    assert main(["draw", str(files / "missing.hsf"), str(files / "interaction.hif")]) == 2
    assert main(["--version"]) == 0


def test_experiment(files, capsys):
    hcf = files / "exp.hcf"
    hcf.write_text("@explore_option{ loggers = [tracegen[partition = {(l1,l2),(l3)}]]; filters = [max_loop_depth = 1] }")
    out = files / "exp"
    args = ["experiment", str(files / "signature.hsf"), str(files / "interaction.hif"), str(hcf)]
    assert main(args + ["--seed", "1", "-o", str(out), "--repetitions", "1"]) == 0
    rows = list(csv.reader((out / "experiment.csv").open()))
    assert rows[0] == ["set", "index", "length", "verdict", "median_seconds", "nodes", "re_steps", "rs_steps"]
    assert {r[0] for r in rows[1:]} == {"T", "S", "M_sa", "M_sc", "M_ia"}
    assert main(args + ["-o", str(out)]) == 2  # --seed is required
