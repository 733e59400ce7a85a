"""Suite runner: config parsing, reports, determinism, CLI."""

import json
import os

import pytest

from ribetkit.errors import StructuralError
from ribetkit.ribet.shapes import RibetShape, shape_specialization
from ribetkit.veriharness.cli import main
from ribetkit.veriharness.config import SuiteConfig, load_config, parse_flat_config
from ribetkit.veriharness.suites import list_suites, run_suite

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DEFAULT_CFG = os.path.join(ROOT, "configs", "default.cfg")


def test_parse_flat_config():
    text = """
    # comment
    top = 1
    [alpha]
    key = a b
    key = c
    [beta]
    x = 1..3
    """
    parsed = parse_flat_config(text)
    assert parsed[""]["top"] == ["1"]
    assert parsed["alpha"]["key"] == ["a b", "c"]
    assert parsed["beta"]["x"] == ["1..3"]
    with pytest.raises(StructuralError):
        parse_flat_config("no equals sign here")


def test_shape_config_round_trip():
    sh = shape_specialization()
    text = sh.to_config_text()
    back = RibetShape.from_mapping(parse_flat_config(text)[""])
    assert back == sh


def test_suite_config_validation():
    with pytest.raises(StructuralError):
        SuiteConfig(suite="example-r2", prime=10)
    with pytest.raises(StructuralError):
        SuiteConfig(suite="example-r2", seeds=[])
    with pytest.raises(StructuralError):
        SuiteConfig(suite="example-r2", shape_paths=["/nonexistent/shape.cfg"])


def test_load_config_overrides(tmp_path):
    cfg_file = tmp_path / "c.cfg"
    cfg_file.write_text("[example-r2]\nprime = 17\nseeds = 1 2 3\n")
    cfg = load_config("example-r2", str(cfg_file), prime=101, jobs=2)
    assert cfg.prime == 101  # CLI wins over file
    assert cfg.seeds == [1, 2, 3]
    assert cfg.jobs == 2


def test_env_budget_override(monkeypatch):
    monkeypatch.setenv("VERIFY_BUDGET_STEPS", "12345")
    cfg = load_config("example-r2")
    assert cfg.budget.max_steps == 12345


def test_list_suites_catalog():
    entries = {e["name"]: e for e in list_suites()}
    assert len(entries) >= 9
    assert "l:stable" in entries["stability"]["anchors"]
    assert any(a in ("l:reg", "c:genericb") for a in entries["regularity"]["anchors"])
    assert "all" in entries


def test_run_example_r2_single_pass():
    cfg = SuiteConfig(suite="example-r2")
    report = run_suite(cfg)
    assert len(report.checks) == 1
    assert report.checks[0].status == "pass"
    assert report.exit_code() == 0


def test_unknown_suite_errors():
    with pytest.raises(StructuralError):
        run_suite(SuiteConfig(suite="no-such-suite"))


def test_report_determinism(tmp_path):
    out1, out2 = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    for out in (out1, out2):
        cfg = SuiteConfig(suite="stability", out_path=out, seeds=[0])
        run_suite(cfg)

    def normalize(path):
        with open(path) as fh:
            doc = json.load(fh)
        doc.pop("generated_at")
        for c in doc["checks"]:
            c.pop("runtime_s")
        return doc

    assert normalize(out1) == normalize(out2)


def test_report_checks_sorted_and_unique(tmp_path):
    cfg = SuiteConfig(suite="regularity")
    report = run_suite(cfg)
    ids = [c.id for c in report.checks]
    assert ids == sorted(ids) and len(ids) == len(set(ids))


def test_specialization_suite_counts():
    cfg = SuiteConfig(suite="specialization", seeds=[0, 1])
    report = run_suite(cfg)
    # 2 seeds x 4 fields + perturbed control.
    assert len(report.checks) == 9
    assert report.summary() == {"pass": 9, "fail": 0, "timeout": 0}


def test_jobs_parallel_matches_serial():
    serial = run_suite(SuiteConfig(suite="regularity", jobs=1))
    parallel = run_suite(SuiteConfig(suite="regularity", jobs=4))
    assert [(c.id, c.status) for c in serial.checks] == [
        (c.id, c.status) for c in parallel.checks
    ]


def test_cli_list_and_run(capsys, tmp_path):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "stability" in out and "anchors" in out

    report_path = str(tmp_path / "r.json")
    code = main(["run", "example-r2", "--out", report_path])
    assert code == 0
    assert os.path.exists(report_path)
    with open(report_path) as fh:
        doc = json.load(fh)
    assert doc["summary"]["pass"] == 1

    assert main(["run", "nope"]) == 2


def test_cli_with_default_config():
    code = main(["run", "tau-invariance", "--config", DEFAULT_CFG])
    assert code == 0


def test_every_suite_has_anchors():
    for entry in list_suites():
        assert entry["anchors"], entry["name"]


def test_budget_timeout_exit_code(monkeypatch, tmp_path):
    # A starved step budget turns heavy checks into recorded timeouts
    # (exit code 3), never crashes.
    monkeypatch.setenv("VERIFY_BUDGET_STEPS", "1")
    cfg = load_config("tau-invariance")
    report = run_suite(cfg)
    statuses = {c.status for c in report.checks}
    assert "timeout" in statuses
    assert "fail" not in statuses
    assert report.exit_code() == 3
