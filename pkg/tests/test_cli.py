"""End-to-end tests of the command line interface."""

import json
import subprocess
import sys

import pytest

from ozfcert.cli import main


def run_cli(*argv):
    return main(list(argv))


def load(path):
    return json.loads(path.read_text())


def test_analyze_reference_case(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = run_cli("analyze", "--g", "0.6", "--multiplier", "1|-0.66@+1", "--grid", "65536", "--out", str(out))
    assert code == 0
    report = load(out)
    assert report["passed"]
    assert report["certificates"][0]["gamma"] == pytest.approx(4.1795, rel=0.01)
    assert report["certificates"][0]["class"] == "Md"
    assert report["metrics"]["offset_gain_certified"] is True
    assert report["metrics"]["circle_criterion"]["passed"] is True
    assert report["metrics"]["suitable_for_shifted_plant"]["passed"] is True
    row = next(r for r in report["checks"] if r["id"] == "gain-bound-reference")
    assert row["source"] == "reference" and row["tolerance"] == "1% relative"
    assert "PASS" in capsys.readouterr().out


def test_analyze_static_multiplier(tmp_path):
    out = tmp_path / "report.json"
    assert run_cli("analyze", "--g", "0.6", "--multiplier", "1|", "--out", str(out)) == 0
    report = load(out)
    assert report["certificates"][0]["gamma"] == pytest.approx(16.3156, rel=0.01)


def test_analyze_anticausal_tap_at_g1(tmp_path):
    out = tmp_path / "report.json"
    assert run_cli("analyze", "--g", "1", "--multiplier", "1|+0.9@-1", "--out", str(out)) == 0
    report = load(out)
    assert report["certificates"][0]["gamma"] == pytest.approx(31.332, rel=0.01)
    assert report["certificates"][0]["class"] == "MdOddOnly"
    assert report["metrics"]["offset_gain_certified"] is False
    assert report["metrics"]["phase_probe"]["md_excluded"] is True
    # the reference comparison row must appear despite the "+0.9" spelling
    row = next(r for r in report["checks"] if r["id"] == "gain-bound-reference")
    assert row["passed"] and row["expected"] == 31.332


def test_analyze_not_suitable_is_reported_failure(tmp_path):
    out = tmp_path / "report.json"
    code = run_cli("analyze", "--g", "0.8", "--multiplier", "1|", "--out", str(out))
    assert code == 1
    report = load(out)
    assert not report["passed"]
    assert report["certificates"] == []
    row = next(r for r in report["checks"] if r["id"] == "gain-bound")
    assert not row["passed"] and "no finite gain" in row["note"]


def test_analyze_bad_multiplier_spec_exit_code(tmp_path, capsys):
    code = run_cli("analyze", "--g", "0.8", "--multiplier", "oops", "--out", str(tmp_path / "r.json"))
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_search_benchmark(tmp_path):
    out = tmp_path / "report.json"
    code = run_cli("search", "--g", "0.8", "--lags", "1", "--c-step", "0.01", "--class", "md", "--out", str(out))
    assert code == 0
    report = load(out)
    assert report["metrics"]["multiplier"] == "1|-0.85@+1"
    assert report["certificates"][0]["gamma"] <= 12.8983 * 1.001


def test_search_not_found(tmp_path):
    out = tmp_path / "report.json"
    code = run_cli("search", "--g", "1", "--lags", "1", "--class", "md", "--out", str(out))
    assert code == 1
    report = load(out)
    assert report["certificates"] == []


def test_simulate_step_pair_outputs(tmp_path):
    out_dir = tmp_path / "run"
    code = run_cli("simulate", "--experiment", "step_pair", "--g", "0.6", "--out", str(out_dir))
    assert code == 0
    report = load(out_dir / "report.json")
    assert report["passed"]
    for name in report["files"]:
        assert (out_dir / name).exists()
    assert any(name.endswith(".png") for name in report["files"])
    assert (out_dir / "step_g0.6_a.csv").read_text().splitlines()[0] == "t,u1,u2,y1,y2"
    assert (out_dir / "step_r2a.csv").read_text().splitlines()[0] == "t,value"


def test_simulate_pulse_noise_outputs(tmp_path):
    out_dir = tmp_path / "run"
    code = run_cli("simulate", "--experiment", "pulse_noise", "--g", "0.8", "--seed", "42", "--out", str(out_dir))
    assert code == 0
    report = load(out_dir / "report.json")
    segments = report["metrics"]["segments"]
    assert len(segments) == 6
    assert all(seg["within_bound"] for seg in segments)
    row = next(r for r in report["checks"] if r["id"] == "pulse-bound-g0.8")
    assert row["passed"]


def test_simulate_pulse_noise_g1_has_no_bound_assertion(tmp_path):
    out_dir = tmp_path / "run"
    code = run_cli("simulate", "--experiment", "pulse_noise", "--g", "1", "--seed", "42", "--out", str(out_dir))
    assert code == 0
    report = load(out_dir / "report.json")
    assert all(r["id"] != "pulse-bound-g1" for r in report["checks"])


def test_simulate_horizon_validation(capsys):
    with pytest.raises(SystemExit):
        run_cli("simulate", "--experiment", "step_pair", "--g", "0.6", "--horizon", "10", "--out", "x")


def test_reproduce_passes_and_is_deterministic(tmp_path):
    out_a = tmp_path / "a" / "report.json"
    out_b = tmp_path / "b" / "report.json"
    assert run_cli("reproduce", "--out", str(out_a), "--seed", "42") == 0
    assert run_cli("reproduce", "--out", str(out_b), "--seed", "42") == 0
    assert out_a.read_bytes() == out_b.read_bytes()
    report = load(out_a)
    assert report["passed"]
    dir_a = out_a.parent / "report_files"
    dir_b = out_b.parent / "report_files"
    files_a = sorted(dir_a.glob("*.csv"))
    files_b = sorted(dir_b.glob("*.csv"))
    assert files_a and [p.name for p in files_a] == [p.name for p in files_b]
    for pa, pb in zip(files_a, files_b):
        assert pa.read_bytes() == pb.read_bytes()
    # every emitted file is on the manifest and exists
    for name in report["files"]:
        assert (dir_a / name).exists()


def test_reproduce_coarse_grid_warns(tmp_path):
    out = tmp_path / "coarse.json"
    code = run_cli("reproduce", "--out", str(out), "--grid", "64")
    report = load(out)
    assert any("grid-resolution" in w for w in report["warnings"])
    # coarse grids are expected to miss tolerances; the report must say so
    assert code == (0 if report["passed"] else 1)


def test_console_module_invocation(tmp_path):
    result = subprocess.run(
        [
            sys.executable,
            "-m",
            "ozfcert.cli",
            "analyze",
            "--g",
            "0.6",
            "--multiplier",
            "1|",
            "--grid",
            "4096",
            "--out",
            str(tmp_path / "r.json"),
        ],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert "overall: PASS" in result.stdout
