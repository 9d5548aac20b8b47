import json
from pathlib import Path

import pytest
import yaml
from click.testing import CliRunner

from expinterp import __version__
from expinterp.cli import main
from expinterp.scenario import parse_scenario, render_report, run_scenario, validate_scenario

SCENARIO = Path(__file__).resolve().parents[1] / "scenarios" / "bundled.yaml"


@pytest.fixture
def runner():
    return CliRunner()


def test_version(runner):
    result = runner.invoke(main, ["version"])
    assert result.exit_code == 0
    assert result.output.strip() == __version__


def test_validate_bundled_clean(runner):
    result = runner.invoke(main, ["validate", str(SCENARIO)])
    assert result.exit_code == 0
    assert result.output.strip() == ""


def test_validate_missing_file_exit_2(runner):
    result = runner.invoke(main, ["validate", "no/such/file.yaml"])
    assert result.exit_code == 2


def test_validate_bad_reference_exit_3(runner, tmp_path):
    doc = {
        "name": "bad",
        "tasks": [{"kind": "criterion", "exponent_set": "missing", "node_set": "nope"}],
    }
    p = tmp_path / "bad.yaml"
    p.write_text(yaml.safe_dump(doc))
    result = runner.invoke(main, ["validate", str(p)])
    assert result.exit_code == 3
    assert "undefined" in result.output


def test_validate_bounded_set_criterion_diagnostic(runner, tmp_path):
    doc = {
        "name": "bounded",
        "exponent_sets": {"finite": {"explicit": [1.0, 2.0]}},
        "node_sets": {"m": {"rays": [{"angle": 0.0, "params": [1.0]}]}},
        "tasks": [{"kind": "criterion", "exponent_set": "finite", "node_set": "m"}],
    }
    p = tmp_path / "bounded.yaml"
    p.write_text(yaml.safe_dump(doc))
    result = runner.invoke(main, ["validate", str(p)])
    assert result.exit_code == 3
    assert "bounded exponent set" in result.output


def test_run_writes_report_and_meta(runner, tmp_path):
    result = runner.invoke(main, ["run", str(SCENARIO), "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    report = json.loads((tmp_path / "bundled.report.json").read_text())
    assert report["schema"] == "expinterp-report/1"
    assert len(report["tasks"]) == 8
    meta = json.loads((tmp_path / "bundled.report.meta.json").read_text())
    assert meta["version"] == __version__
    assert "generated_at" in meta


def test_run_determinism(runner, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        result = runner.invoke(main, ["run", str(SCENARIO), "--out", str(out), "--seed", "3"])
        assert result.exit_code == 0
    assert (a / "bundled.report.json").read_bytes() == (b / "bundled.report.json").read_bytes()


def test_run_env_var_out(runner, tmp_path, monkeypatch):
    monkeypatch.setenv("EXPINTERP_OUT", str(tmp_path / "env"))
    result = runner.invoke(main, ["run", str(SCENARIO)])
    assert result.exit_code == 0
    assert (tmp_path / "env" / "bundled.report.json").exists()


def test_scenario_roundtrip_and_render():
    sc = parse_scenario(SCENARIO)
    assert validate_scenario(sc) == []
    report = run_scenario(sc, seed=0)
    text = render_report(report)
    assert text.endswith("\n")
    assert json.loads(text) == report
    # re-parsing the same file yields an equal scenario value
    sc2 = parse_scenario(SCENARIO)
    assert sc.name == sc2.name
    assert sc.tasks == sc2.tasks
    assert sc.exponent_sets == sc2.exponent_sets
    assert sc.node_sets == sc2.node_sets


def test_growth_task_plot_emission(tmp_path):
    doc = {
        "name": "plot",
        "tasks": [
            {
                "kind": "growth",
                "exponents": [1.0, 2.0, 3.0],
                "eps": 0.5,
                "samples": 10,
                "x_max": 5.0,
                "emit_plot": True,
            }
        ],
    }
    p = tmp_path / "plot.yaml"
    p.write_text(yaml.safe_dump(doc))
    sc = parse_scenario(p)
    report = run_scenario(sc, seed=0, out_dir=tmp_path)
    (task,) = report["tasks"]
    assert task["passed"]
    csv = (tmp_path / task["plot"]).read_text().splitlines()
    assert csv[0] == "x,value"
    assert len(csv) == 11
