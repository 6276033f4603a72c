from __future__ import annotations

import io
import json
import shutil
import subprocess
import sys

import jsonschema
import pytest

from orlicz_domain import cli
from orlicz_domain.cli import EXIT_DOMAIN, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE, RunConfig, dispatch


def run(*argv):
    buf = io.StringIO()
    code = dispatch(list(argv), buf)
    return code, buf.getvalue()


def test_decide_sobolev_target():
    code, text = run("decide", "--scenario", "john", "--n", "3", "--m", "1", "--sobolev", "log", "--p", "3")
    assert code == EXIT_OK
    out = json.loads(text)
    assert out["schema"] == "orlicz_domain/verdict/v1"
    assert (out["outcome"], out["reason"]) == ("NoOptimal", "CriterionVi")
    assert out["target"] == "exp L^{3/2}"


def test_decide_explicit_target_and_alpha():
    code, text = run("decide", "--alpha", "1/3", "--target", "zygmund", "--p", "6")
    assert code == EXIT_OK
    assert json.loads(text)["outcome"] == "ExistsOptimal"


def test_decide_l1_optimal_target():
    # phi = t^{2/3} = t^{1-alpha}: the target is reached from L^1
    code, text = run("decide", "--alpha", "1/3", "--target", "zygmund", "--p", "3/2")
    assert code == EXIT_OK and json.loads(text)["outcome"] == "L1Optimal"


def test_decide_cross_check_and_validation():
    code, text = run("decide", "--scenario", "john", "--n", "3", "--m", "1", "--target", "zygmund", "--p", "6",
                     "--cross-check")
    out = json.loads(text)
    assert code == EXIT_OK and out["report"]["condition_v"]["holds"] is True
    jsonschema.validate(out, cli.load_schema("verdict"))


def test_output_is_deterministic():
    argv = ("decide", "--scenario", "trace", "--n", "5", "--m", "2", "--d", "4", "--sobolev", "loglog",
            "--p", "5/2", "--q", "1")
    assert run(*argv) == run(*argv)


@pytest.mark.parametrize("argv", [
    ("decide", "--scenario", "john", "--n", "3", "--m", "3", "--target", "linfinity"),
    ("decide", "--scenario", "john", "--n", "3", "--target", "linfinity"),
    ("decide", "--alpha", "1/3", "--target", "zygmund"),
    ("decide", "--alpha", "1/3"),
])
def test_domain_errors_exit_1(argv, capsys):
    code, _ = run(*argv)
    assert code == EXIT_DOMAIN
    assert capsys.readouterr().err.startswith("error:")


def test_usage_error_exits_64(capsys):
    with pytest.raises(SystemExit) as exc:
        dispatch(["decide", "--target", "nonsense"])
    assert exc.value.code == EXIT_USAGE
    err = capsys.readouterr().err
    assert "usage" in err and "config schema" in err


def test_missing_subcommand_exits_64():
    with pytest.raises(SystemExit) as exc:
        dispatch([])
    assert exc.value.code == EXIT_USAGE


def test_run_config_validation(tmp_path):
    with pytest.raises(ValueError):
        RunConfig(grid_points=1000)
    with pytest.raises(ValueError):
        RunConfig(tolerance=1e-2)
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"grid_points": 100}))
    code, _ = run("--config", str(cfg), "selftest")
    assert code == EXIT_DOMAIN
    cfg.write_text(json.dumps({"grid_points": 512, "seed": 3}))
    assert run("--config", str(cfg), "selftest")[0] == EXIT_OK


def test_empty_csv_message(tmp_path, capsys):
    f = tmp_path / "empty.csv"
    f.write_text("# nothing here\n")
    code, _ = run("norm", "--csv", str(f), "--space", "lebesgue", "--r", "2")
    assert code == EXIT_DOMAIN
    assert "error: empty function" in capsys.readouterr().err


def test_norm_subcommand(tmp_path):
    f = tmp_path / "f.csv"
    f.write_text("0.0,1.0\n0.25,0.0\n")
    code, text = run("norm", "--csv", str(f), "--space", "lebesgue", "--r", "2")
    out = json.loads(text)
    assert code == EXIT_OK and out["value"] == pytest.approx(0.5)
    code, text = run("norm", "--csv", str(f), "--space", "orlicz", "--young", "power:2", "--orlicz-bounds")
    out = json.loads(text)
    assert out["value"] == pytest.approx(0.5)
    assert out["bounds"]["lower"] <= out["bounds"]["upper"] * (1 + 1e-6)
    code, text = run("norm", "--csv", str(f), "--space", "marcinkiewicz", "--r", "2")
    # sup_t t^{1/2} f**(t) on chi_(0,1/4) is 1/2
    assert json.loads(text)["value"] == pytest.approx(0.5)


def test_apply_op_pointwise(tmp_path):
    f = tmp_path / "one.csv"
    f.write_text("0.0,1.0\n")
    code, text = run("--grid-points", "256", "apply-op", "--op", "hardy", "--alpha", "1/2", "--csv", str(f))
    assert code == EXIT_OK
    rows = [line.split(",") for line in text.strip().splitlines()[1:]]
    t, v = float(rows[-1][0]), float(rows[-1][1])
    assert 0 < t < 1 and 0 <= v < 2


def test_apply_op_probe_verdicts():
    code, text = run("apply-op", "--op", "hardy", "--alpha", "1/4", "--probe",
                     "--domain", "lebesgue", "--domain-r", "1", "--target-space", "lebesgue", "--target-r", "inf")
    assert code == EXIT_OK and json.loads(text)["verdict"] == "divergent"
    code, text = run("apply-op", "--op", "hardy", "--alpha", "1/2", "--probe",
                     "--domain", "lebesgue", "--domain-r", "4", "--target-space", "lebesgue", "--target-r", "inf")
    out = json.loads(text)
    assert code == EXIT_OK and out["verdict"] == "bounded"
    jsonschema.validate(out, cli.load_schema("probe"))


def test_witness_partial_exits_2():
    code, text = run("witness", "--alpha", "1/2", "--atilde", "term:1 * t^{2} * log^{-3} @ inf",
                     "--btilde", "term:1 * t^{2} * log^{1} @ inf")
    assert code == EXIT_INCONCLUSIVE
    out = json.loads(text)
    assert out["schema"] == "orlicz_domain/witness/v1" and out["complete"] is False


def test_witness_short_run_completes(tmp_path):
    csv = tmp_path / "w.csv"
    code, text = run("witness", "--alpha", "1/2", "--atilde", "term:1 * t^{2} * log^{-3} @ inf",
                     "--btilde", "term:1 * t^{2} * log^{1} @ inf", "--j-max", "3", "--csv", str(csv))
    assert code == EXIT_OK and json.loads(text)["complete"] is True
    assert csv.read_text().strip()


@pytest.mark.parametrize("fmt", ["markdown", "latex", "json"])
def test_table_check_against_fixtures(fmt):
    code, text = run("table", "--table", "1", "--format", fmt, "--check")
    assert code == EXIT_OK and text


def test_table_params_subset():
    code, text = run("table", "--table", "3", "--params", '{"nm": [[3, 1]]}', "--format", "json")
    out = json.loads(text)
    assert code == EXIT_OK and {r["scenario"] for r in out["rows"]} == {
        "Trace(n=3, m=1, d=2)", "Trace(n=3, m=1, d=3)"}


def test_fixture_override(tmp_path, monkeypatch):
    shutil.copy(cli.fixtures_dir() / "table1.md", tmp_path / "table1.md")
    monkeypatch.setenv("ORLICZ_FIXTURES", str(tmp_path))
    assert run("table", "--table", "1", "--check")[0] == EXIT_OK
    (tmp_path / "table1.md").write_text("tampered\n")
    assert run("table", "--table", "1", "--check")[0] == EXIT_DOMAIN


def test_selftest_passes():
    code, text = run("selftest")
    out = json.loads(text)
    assert code == EXIT_OK and out["passed"] and len(out["checks"]) == 5


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "orlicz_domain", "decide", "--alpha", "1/3",
                          "--target", "linfinity"], capture_output=True, text=True)
    assert res.returncode == EXIT_OK
    assert json.loads(res.stdout)["reason"] == "BoundedG_LInfinityCase"
