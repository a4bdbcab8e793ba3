import json
import subprocess
import sys

import pytest

from issue_control.cli import EXIT_CAPACITY, EXIT_PARSE, EXIT_REALIZATION, EXIT_USAGE, main, solve_file
from issue_control.experiment import read_results_csv
from issue_control.fileio import load_election, load_margin

INTRO = {
    "domain": "binary",
    "p": 1,
    "candidates": [[0, 0, 1], [1, 1, 0]],
    "voters": [[1, 1, 1], [1, 1, 1], [1, 1, 1], [1, 1, 0], [1, 1, 0]],
}


@pytest.fixture
def intro(tmp_path):
    path = tmp_path / "intro.json"
    path.write_text(json.dumps(INTRO))
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_exhaustive(capsys, intro):
    code, out, _ = run(capsys, "solve", intro, "--solver", "exhaustive", "--tie", "best")
    assert code == 0
    assert "issue_set: {3}" in out and "target_wins: yes" in out and "votes: 3 2" in out


def test_solve_greedy_matches(capsys, intro):
    exact = solve_file(intro, "exhaustive", tie="best")
    code, out, _ = run(capsys, "solve", intro, "--solver", "greedy", "--tie", "best", "--format", "csv")
    assert code == 0
    header, row = out.strip().splitlines()
    assert header == "issue_set,votes,support,target_wins"
    assert row.split(",")[2] == str(exact.target_support)


def test_solve_without_winner_reports_best_support(capsys, tmp_path):
    path = tmp_path / "lose.json"
    path.write_text(json.dumps({"p": 1, "candidates": [[0], [1]], "voters": [[1], [1]]}))
    code, out, _ = run(capsys, "solve", path)
    assert code == 0 and "target_wins: no" in out and "support: 0" in out


def test_parse_error_status(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{")
    code, _, err = run(capsys, "solve", path)
    assert code == EXIT_PARSE and "parse error" in err


def test_capacity_status(capsys, tmp_path):
    path = tmp_path / "wide.json"
    path.write_text(json.dumps({"p": 1, "candidates": [[0] * 4, [1] * 4], "voters": [[0] * 4]}))
    code, _, err = run(capsys, "maxsupport", path, "--max-issues", "3")
    assert code == EXIT_CAPACITY and "capacity" in err


def test_usage_status(capsys, intro):
    assert run(capsys, "solve", intro, "--solver", "oracle")[0] == EXIT_USAGE
    assert run(capsys, "poly", intro, "--algorithm", "siw")[0] == EXIT_USAGE  # needs one voter
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE


def test_maxsupport_exports_lp(capsys, intro, tmp_path):
    lp = tmp_path / "m.lp"
    code, out, _ = run(capsys, "maxsupport", intro, "--tie", "best", "--export-lp", lp)
    assert code == 0 and "support: 3" in out
    assert lp.read_text().startswith("\\ Max Support")


def test_export_lp_to_stdout(capsys, intro):
    code, out, _ = run(capsys, "export-lp", intro)
    assert code == 0 and out.rstrip().endswith("End")


def test_poly(capsys, tmp_path):
    path = tmp_path / "one.json"
    path.write_text(json.dumps({"domain": "binary", "candidates": [[0, 0], [1, 1]], "voters": [[1, 0]]}))
    code, out, _ = run(capsys, "poly", path, "--algorithm", "siw")
    assert code == 0 and "controllable: yes" in out and "witness: {2}" in out
    code, out, _ = run(capsys, "poly", path, "--algorithm", "bsi")
    assert code == 0 and "support:" in out


def test_greedy(capsys, intro):
    code, out, _ = run(capsys, "greedy", intro, "--tie", "worst")
    assert code == 0 and "support: 3" in out


def test_generate(capsys, tmp_path):
    out = tmp_path / "g.json"
    assert run(capsys, "generate", "--kind", "tree", "--m", 3, "--n", 7, "--l", 5, "--seed", 4, "--out", out)[0] == 0
    e, p = load_election(out)
    assert (e.num_candidates, e.num_voters, e.num_issues) == (3, 7, 5)
    assert run(capsys, "generate", "--kind", "gaussian", "--l", 4, "--seed", 4, "--out", out)[0] == 0
    first = out.read_text()
    run(capsys, "generate", "--kind", "gaussian", "--l", 4, "--seed", 4, "--out", out)
    assert out.read_text() == first
    assert run(capsys, "generate", "--kind", "tree", "--l", 40, "--out", out)[0] == EXIT_USAGE


def test_reduce_ilp_with_lift_and_realize(capsys, tmp_path):
    src = tmp_path / "ilp.json"
    src.write_text(json.dumps({"A": [[1]], "b": [1]}))
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "reduce", src, "--from", "ilp", "--lift", "worstcase", "--realize", "--p", 1, "--out", out)
    assert code == 0
    sidecar = json.loads((tmp_path / "r.json.provenance.json").read_text())
    assert sidecar["steps"] == ["ilp->svis", "svis-lift", "realize-single-voter"]
    assert sidecar["notes"]["epsilon"] == "1/2"
    code, stdout, _ = run(capsys, "solve", out, "--tie", "worst")
    assert "target_wins: yes" in stdout


def test_reduce_margin_outputs(capsys, tmp_path):
    src = tmp_path / "ilp.json"
    src.write_text(json.dumps({"A": [[1]], "b": [2]}))
    out = tmp_path / "m.json"
    assert run(capsys, "reduce", src, "--from", "ilp", "--problem", "tcis", "--out", out)[0] == 0
    assert load_margin(out).rows == 3
    graph = tmp_path / "g.dimacs"
    graph.write_text("p edge 3 2\ne 1 2\ne 2 3\n")
    assert run(capsys, "reduce", graph, "--from", "mis", "--out", out)[0] == 0
    assert load_margin(out).entries[0] == (2, -3, -1)
    assert run(capsys, "reduce", graph, "--from", "mis", "--lift", "worstcase", "--out", out)[0] == EXIT_USAGE


def test_reduce_set_systems(capsys, tmp_path):
    x3c = tmp_path / "x.json"
    x3c.write_text(json.dumps({"t": 3, "sets": [[1, 2, 3]]}))
    out = tmp_path / "e.json"
    assert run(capsys, "reduce", x3c, "--from", "x3c", "--out", out)[0] == 0
    assert load_election(out)[0].num_candidates == 7
    hs = tmp_path / "h.json"
    hs.write_text(json.dumps({"num_elements": 2, "sets": [[1], [2]], "k": 1}))
    assert run(capsys, "reduce", hs, "--from", "hittingset", "--out", out)[0] == 0
    code, stdout, _ = run(capsys, "solve", out, "--tie", "best")
    assert "target_wins: no" in stdout
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"t": 3, "sets": [[1, 1, 2]]}))
    assert run(capsys, "reduce", bad, "--from", "x3c", "--out", out)[0] == EXIT_PARSE


def test_realization_error_status(capsys, tmp_path, monkeypatch):
    import issue_control.reductions as red
    from issue_control.errors import RealizationError

    def fail(*args, **kwargs):
        raise RealizationError("residual too large")

    monkeypatch.setattr(red, "realize_two_candidate", fail)
    src = tmp_path / "ilp.json"
    src.write_text(json.dumps({"A": [[1]], "b": [1]}))
    code = main(["reduce", str(src), "--from", "ilp", "--problem", "tcis", "--realize", "--out", str(tmp_path / "o.json")])
    assert code == EXIT_REALIZATION


def test_experiment_and_plot(capsys, tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"sweep_param": "n", "sweep_values": [10, 20], "num_issues": 4,
                                  "instances_per_point": 5, "base_seed": 3}))
    csv_path = tmp_path / "r.csv"
    code, out, _ = run(capsys, "experiment", "--config", config, "--instances", 2, "--out", csv_path,
                       "--summary", tmp_path / "s.txt")
    assert code == 0 and "mean_ratio" in out
    rows = read_results_csv(csv_path)
    assert len(rows) == 2 * 2 * 3  # flag overrides the config's instance count
    code, out, _ = run(capsys, "plot", csv_path, "--out-dir", tmp_path / "plots")
    assert code == 0 and (tmp_path / "plots" / "ratio_vs_n.svg").exists()


def test_experiment_capacity_status(capsys):
    assert run(capsys, "experiment", "--sweep", "l", "--values", 4, 30, "--instances", 1)[0] == EXIT_CAPACITY


def test_console_entry_point(intro):
    result = subprocess.run(
        [sys.executable, "-m", "issue_control.cli", "solve", str(intro), "--tie", "best"],
        capture_output=True, text=True, check=False,
    )
    assert result.returncode == 0 and "issue_set: {3}" in result.stdout
