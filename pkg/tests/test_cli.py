import csv
import json

import pytest

from jamplan import cli, geometry
from jamplan.scenario import generate_random_scenario, save_scenario


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "scenario.json"
    save_scenario(generate_random_scenario(1, 3, sample_count=64, report_sample_count=256), path)
    return path


def run(argv):
    try:
        return cli.main([str(a) for a in argv])
    except SystemExit as exc:  # argparse exits directly
        return exc.code


def test_solve_writes_record(tmp_path, scenario_file, capsys):
    out = tmp_path / "rec.json"
    assert run(["solve", "--scenario", scenario_file, "--out", out]) == 0
    doc = json.loads(out.read_text())
    assert doc["method"] == "proposed"
    assert "+/-" in capsys.readouterr().out


def test_solve_is_deterministic_except_wall_clock(tmp_path, scenario_file):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run(["solve", "--scenario", scenario_file, "--method", "conventional",
                    "--seed", 9, "--out", out]) == 0
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    da.pop("wall_clock_seconds"), db.pop("wall_clock_seconds")
    assert da == db
    assert da["seeds"] == {"scenario": 3, "optimizer": 9, "mc": 9}


def test_solve_does_not_touch_the_scenario(scenario_file):
    before = scenario_file.read_bytes()
    assert run(["solve", "--scenario", scenario_file, "--mc-samples", 16]) == 0
    assert scenario_file.read_bytes() == before


def test_unknown_method_is_a_usage_error(scenario_file, capsys):
    assert run(["solve", "--scenario", scenario_file, "--method", "simplex"]) == 2
    assert "usage" in capsys.readouterr().err


def test_scenario_errors_exit_3(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema_version": 1}))
    assert run(["solve", "--scenario", bad]) == 3
    assert run(["solve", "--scenario", tmp_path / "missing.json"]) == 3


def test_solver_failure_exits_4(scenario_file, monkeypatch):
    def boom(*a, **k):
        raise RuntimeError("diverged")

    monkeypatch.setitem(cli.METHODS, "proposed", boom)
    assert run(["solve", "--scenario", scenario_file]) == 4


def test_sweep_rejects_single_step(tmp_path, scenario_file):
    assert run(["sweep", "--scenario", scenario_file, "--steps", 1, "--out", tmp_path / "s.csv"]) == 2
    assert run(["sweep", "--scenario", scenario_file, "--pmin", 2, "--pmax", 1,
                "--out", tmp_path / "s.csv"]) == 2


def test_sweep_grid_and_row_count(tmp_path, scenario_file, monkeypatch):
    # stub the solvers: only the grid and the row layout are under test here
    from jamplan import experiments
    from jamplan.planner import solve

    fast = {m: (lambda s, _m=m: solve(s, n_starts=1, max_evals=50, max_outer_iterations=1))
            for m in experiments.METHODS}
    monkeypatch.setattr(experiments, "METHODS", fast)
    out = tmp_path / "s.csv"
    assert run(["sweep", "--scenario", scenario_file, "--pmin", 0.1, "--pmax", 1.1, "--steps", 11,
                "--methods", "all", "--out", out]) == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 33
    caps = sorted({float(r["p_max_watts"]) for r in rows})
    assert len(caps) == 11 and caps[0] == 0.1 and caps[-1] == 1.1
    assert all(abs(b - a - 0.1) < 1e-12 for a, b in zip(caps, caps[1:]))


def test_compare_single_trial(tmp_path, capsys):
    out = tmp_path / "cmp.csv"
    assert run(["compare", "--trials", 1, "--n-eaves", 1, "--seed", 4, "--jitter-std", 0.05,
                "--mc-samples", 32, "--report-samples", 64, "--out", out]) == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert sorted(r["method"] for r in rows) == ["conventional", "joint12d", "proposed"]
    # training and test values come from different batches
    assert all(r["train_secrecy_bps"] != r["expected_secrecy_bps"] for r in rows)
    with open(cli.summary_path(out)) as fh:
        (summary,) = list(csv.DictReader(fh))
    assert 0.0 <= float(summary["win_rate"]) <= 1.0
    for m in ("proposed", "joint12d", "conventional"):
        assert f"median_{m}_bps" in summary


def test_validate_passes(capsys):
    assert run(["validate"]) == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if l.startswith(("PASS", "FAIL"))]
    assert len(lines) >= 6


def test_validate_catches_corrupted_gain(monkeypatch, capsys):
    monkeypatch.setattr(geometry, "antenna_gain", lambda c: 1.0 - abs(c))
    assert run(["validate"]) == 1
    out = capsys.readouterr().out
    assert any(l.startswith("FAIL") and "antenna_gain" in l for l in out.splitlines())
