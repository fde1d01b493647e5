import csv
import io
import json

import pytest

from hoskip.cli import COLUMNS, ConfigError, load_config, main


def _write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def _csv_rows(text):
    lines = text.splitlines()
    assert lines[0].startswith("#") and "config_hash=" in lines[0]
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


def test_table2_preset(tmp_path, capsys):
    out = tmp_path / "t2.csv"
    assert main(["run", "--preset", "table2", "--out", str(out), "--strict"]) == 0
    rows = _csv_rows(out.read_text())
    assert len(rows) == 7
    assert all(r["within_tolerance"] == "1" for r in rows)
    assert len({r["config_hash"] for r in rows}) == 1
    assert list(rows[0]) == list(COLUMNS)


def test_csv_is_bit_stable(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["run", "--preset", "fig4", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_json_output(tmp_path):
    out = tmp_path / "f5.json"
    cfg = _write(tmp_path, "[mobility]\nv_kmh_grid = 0, 120\n[analysis]\nstrategies = BC, FS\nunits = bits\n")
    assert main(["run", "--preset", "fig5", "--config", cfg, "--format", "json", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["analysis"] == "throughput"
    rows = data["rows"]
    assert len(rows) == 2 * 2 * 2  # strategies x d_f x velocities
    assert {r["AT_unit"] for r in rows} == {"bit/s"}
    assert rows[0]["coverage_mc"] is None


def test_coverage_with_monte_carlo(tmp_path):
    cfg = _write(tmp_path, "[analysis]\nkind = coverage\ntheta_db = 0, 6\nstrategies = BC, MS\nic = on\n")
    out = tmp_path / "c.csv"
    assert main(["run", "--config", cfg, "--mc-samples", "4000", "--seed", "3", "--out", str(out), "--strict"]) == 0
    rows = _csv_rows(out.read_text())
    assert len(rows) == 4
    for r in rows:
        assert float(r["mc_ci_low"]) <= float(r["coverage_mc"]) <= float(r["mc_ci_high"])


def test_seed_changes_only_mc_columns(tmp_path):
    cfg = _write(tmp_path, "[analysis]\nkind = coverage\ntheta_db = 6\nstrategies = BC\nic = off\n")
    outs = []
    for seed in ("1", "2"):
        out = tmp_path / f"s{seed}.csv"
        assert main(["run", "--config", cfg, "--mc-samples", "2000", "--seed", seed, "--out", str(out)]) == 0
        outs.append(_csv_rows(out.read_text())[0])
    assert outs[0]["coverage_analytic"] == outs[1]["coverage_analytic"]
    assert outs[0]["coverage_mc"] != outs[1]["coverage_mc"]


def test_bad_eta_rejected(tmp_path, capsys):
    cfg = _write(tmp_path, "[network]\neta = 1.5\n")
    assert main(["validate", "--config", cfg]) == 1
    assert "path loss exponent must exceed 2" in capsys.readouterr().err


@pytest.mark.parametrize("text,msg", [
    ("[network]\nlambda_macro = 3\n", "unknown key"),
    ("[network\n", "malformed"),
    ("[network]\neta = four\n", "cannot parse"),
    ("[analysis]\nkind = plot\n", "kind"),
    ("[mobility]\nd_m_s = 0.9\nd_f_s = 0.7\n", "d_m <= d_f"),
    ("[extra]\na = 1\n", "unknown section"),
    ("[analysis]\ntheta_db =\n", "empty"),
])
def test_config_errors(tmp_path, capsys, text, msg):
    cfg = _write(tmp_path, text)
    assert main(["run", "--config", cfg]) == 1
    assert msg in capsys.readouterr().err


def test_usage_errors(capsys):
    assert main(["run"]) == 1
    assert main(["frobnicate"]) == 1
    assert main(["run", "--preset", "nope"]) == 1


def test_ranges_and_db_conversion(tmp_path):
    cfg = load_config(_write(tmp_path, "[analysis]\ntheta_db = -10:20:5\n[mobility]\nv_kmh_grid = 0:200:50\n"))
    assert cfg.theta_db == [-10, -5, 0, 5, 10, 15, 20]
    assert cfg.thresholds[2] == 1.0
    assert cfg.velocities == [0, 50, 100, 150, 200]
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, "[mobility]\nv_kmh_grid = 0:10:0\n"))


def test_validate_default(capsys):
    assert main(["validate", "--mc-samples", "3000"]) == 0
    out = capsys.readouterr().out
    assert "[FAIL]" not in out and "checks passed" in out


def test_strict_flags_tolerance_violation(tmp_path, monkeypatch):
    import hoskip.cli as cli
    from hoskip.analytic import CoverageResult

    monkeypatch.setattr(cli.cv, "coverage", lambda s, p, T, ic=False: CoverageResult(0.9, 0.0, strategy=s))
    cfg = _write(tmp_path, "[analysis]\nkind = coverage\ntheta_db = 6\nstrategies = BC\nic = off\n")
    args = ["run", "--config", cfg, "--mc-samples", "2000", "--out", str(tmp_path / "x.csv")]
    assert main(args) == 0
    assert main(args + ["--strict"]) == 2
    assert _csv_rows((tmp_path / "x.csv").read_text())[0]["within_tolerance"] == "0"
