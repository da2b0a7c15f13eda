"""CLI configuration validation, artifact determinism, and exit codes."""

import json
import os

import pytest

from dualineq import cli
from dualineq.errors import DomainError


def test_runconfig_validation():
    cli.RunConfig(command="constants", dimension=3.0)  # valid
    with pytest.raises(DomainError):
        cli.RunConfig(command="bogus")
    with pytest.raises(DomainError):
        cli.RunConfig(command="constants", dimension=2.0)
    with pytest.raises(DomainError):
        cli.RunConfig(command="onofri", dimension=3.0)
    cli.RunConfig(command="onofri", dimension=2.0)  # valid
    with pytest.raises(DomainError):
        cli.RunConfig(command="constants", grid_size=1000)  # not a power of two
    with pytest.raises(DomainError):
        cli.RunConfig(command="constants", grid_size=128)  # below range
    with pytest.raises(DomainError):
        cli.RunConfig(command="constants", tolerance=1e-3)
    with pytest.raises(DomainError):
        cli.RunConfig(command="constants", output_format="xml")
    with pytest.raises(DomainError):
        cli.RunConfig(command="flow", flow_init="warm")


def test_constants_suite_passes_and_writes_json(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    cfg = cli.RunConfig(command="constants", dimension=3.0)
    code = cli.run(cfg)
    assert code == 0
    path = tmp_path / "constants.json"
    assert path.exists()
    payload = json.loads(path.read_text())
    assert payload["schema"] == 1
    assert payload["suite"] == "constants"
    assert payload["pass"] is True
    assert all(c["pass"] for c in payload["checks"])


def test_artifacts_are_deterministic(tmp_path, monkeypatch):
    texts = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(out))
        cfg = cli.RunConfig(command="spectral", dimension=3.0, output_format="csv")
        assert cli.run(cfg) == 0
        texts.append((out / "spectral.csv").read_bytes())
    assert texts[0] == texts[1]


def test_csv_header_and_quoting(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    cfg = cli.RunConfig(command="constants", dimension=3.0, output_format="csv")
    cli.run(cfg)
    lines = (tmp_path / "constants.csv").read_text().splitlines()
    assert lines[0] == cli.CSV_HEADER
    assert all(line.count(",") >= 5 for line in lines[1:])


def test_output_path_used_without_env(tmp_path, monkeypatch):
    monkeypatch.delenv(cli.OUTPUT_DIR_ENV, raising=False)
    cfg = cli.RunConfig(command="constants", dimension=3.0, output_path=str(tmp_path))
    cli.run(cfg)
    assert (tmp_path / "constants.json").exists()


def test_exit_code_is_first_failing_suite(monkeypatch, tmp_path):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))

    def failing_suite(cfg):
        art = cli.SuiteArtifact("spectral")
        art.add("forced failure", 1.0, 0.0, -1.0, False)
        return art

    monkeypatch.setitem(cli.SUITES, "spectral", (failing_suite,))
    cfg = cli.RunConfig(command="spectral", dimension=3.0)
    assert cli.run(cfg) == 1


def test_report_summary_requires_artifacts():
    with pytest.raises(DomainError):
        cli.report_summary([])


def test_report_summary_formats_failures():
    art = cli.SuiteArtifact("demo")
    art.add("good", 1.0, 1.0, 0.0, True)
    art.add("bad", 2.0, 1.0, -1.0, False)
    text = cli.report_summary([art])
    assert "FAIL" in text and "pass" in text
    assert not art.passed


def test_main_parses_arguments(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    code = cli.main(["constants", "--dimension", "4"])
    assert code == 0
    out = capsys.readouterr().out
    assert "constants" in out and "FAIL" not in out


def test_main_defaults_onofri_to_dimension_two(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    code = cli.main(["onofri"])
    assert code == 0
    payload = json.loads((tmp_path / "onofri.json").read_text())
    assert payload["config"]["dimension"] == 2.0


def test_flow_history_artifact(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    cfg = cli.RunConfig(command="flow", dimension=3.0)
    assert cli.run(cfg) == 0
    hist = (tmp_path / "flow_history.csv").read_text().splitlines()
    assert hist[0] == "label,tau,J,H,Hprime,Q,kappa0"
    assert len(hist) > 10


def test_g17_rendering_roundtrips():
    for x in (0.1, 1.0 / 3.0, 1e-300, 12345.6789):
        assert float(cli._g17(x)) == x
