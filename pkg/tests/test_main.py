"""End-to-end tests for the arcgraphs CLI pipeline."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from arcgraphs import main
from arcgraphs.config import settings
from arcgraphs.services.verdict import Verdict


def _report(capsys: pytest.CaptureFixture[str]) -> dict:
    return json.loads(capsys.readouterr().out)


def test_build_writes_a_graph_document(tmp_path: Path) -> None:
    out = tmp_path / "g.json"
    code = main.run(
        ["build", "--polygon", "6", "--k", "2", "--out", str(out), "--deterministic"]
    )
    assert code == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["exit_code"] == 0
    assert report["holds"] is True
    assert len(report["result"]["vertices"]) == 21
    assert "generated_at" not in report


def test_deterministic_runs_are_byte_identical(tmp_path: Path) -> None:
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for out in (first, second):
        argv = ["aut", "--polygon", "5", "--k", "2", "--out", str(out), "--deterministic"]
        assert main.run(argv) == 0
    assert first.read_bytes() == second.read_bytes()


def test_aut_reports_the_group_order(capsys: pytest.CaptureFixture[str]) -> None:
    assert main.run(["aut", "--polygon", "5", "--k", "2", "--deterministic"]) == 0
    result = _report(capsys)["result"]
    assert result["order"] == 10
    assert result["mapping_classes"]["holds"] is True


def test_info_from_a_surface_file(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    spec = tmp_path / "s04.json"
    spec.write_text('{"interior_points": 4}', encoding="utf-8")
    code = main.run(["info", "--surface", str(spec), "--arc-bound", "2", "--deterministic"])
    assert code == 0
    result = _report(capsys)["result"]
    assert result["omega"] == 6
    assert result["backend"] == "triangulated"
    assert len(result["reference"]) == 6


def test_dist_reports_distance(capsys: pytest.CaptureFixture[str]) -> None:
    endpoints = ["--u", "[[0,2],[2,4]]", "--v", "[[0,2],[3,5]]"]
    assert main.run(["dist", "--polygon", "6", "--k", "2", "--deterministic", *endpoints]) == 0
    result = _report(capsys)["result"]
    assert result["distance"] == len(result["shortest_path"]) - 1


def test_degenerate_surface_is_a_usage_error(capsys: pytest.CaptureFixture[str]) -> None:
    assert main.run(["info", "--polygon", "3", "--deterministic"]) == 2


def test_missing_parameter_is_a_usage_error(capsys: pytest.CaptureFixture[str]) -> None:
    assert main.run(["dist", "--polygon", "6", "--k", "2", "--deterministic"]) == 2
    report = _report(capsys)
    assert report["exit_code"] == 2
    assert any("--u" in e for e in report["errors"])


def test_bad_json_argument_is_a_usage_error() -> None:
    assert main.run(["dist", "--polygon", "6", "--u", "[[0,2"]) == 2


def test_failed_property_exits_one(mocker, capsys: pytest.CaptureFixture[str]) -> None:
    failed = Verdict(check="convexity", instance="stub", holds=False, witnesses=["w"])
    mocker.patch(
        "arcgraphs.nodes.command_runner.paths.convexity_sweep", return_value=failed
    )
    assert main.run(["convexity-sweep", "--polygon", "5", "--k", "2", "--deterministic"]) == 1
    report = _report(capsys)
    assert report["holds"] is False
    assert report["result"]["witnesses"] == ["w"]


def test_build_as_dot(capsys: pytest.CaptureFixture[str]) -> None:
    assert main.run(["build", "--polygon", "5", "--format", "dot"]) == 0
    dot = capsys.readouterr().out
    assert dot.startswith("graph A {")
    assert dot.count(" -- ") == 5


def test_convexity_sweep_samples_by_default(
    monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
) -> None:
    monkeypatch.setattr(settings, "sample_pairs", 5)
    argv = ["convexity-sweep", "--polygon", "6", "--k", "2", "--deterministic"]
    assert main.run(argv) == 0
    details = _report(capsys)["result"]["details"]
    assert details["pairs_checked"] == 5
    assert details["pairs_total"] > 5


def test_explicit_sample_overrides_the_default(
    monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
) -> None:
    monkeypatch.setattr(settings, "sample_pairs", 5)
    argv = ["convexity-sweep", "--polygon", "6", "--k", "2", "--sample", "7", "--deterministic"]
    assert main.run(argv) == 0
    assert _report(capsys)["result"]["details"]["pairs_checked"] == 7


def test_unexpected_failure_is_reported(mocker, capsys: pytest.CaptureFixture[str]) -> None:
    mocker.patch(
        "arcgraphs.nodes.command_runner.paths.convexity_sweep", side_effect=RuntimeError("boom")
    )
    assert main.run(["convexity-sweep", "--polygon", "5", "--k", "2", "--deterministic"]) == 2
    report = _report(capsys)
    assert report["exit_code"] == 2
    assert any("RuntimeError: boom" in e for e in report["errors"])
