from __future__ import annotations

import json
import subprocess
import sys

import pytest

from glsm_lab.cli import BUNDLED_FIXTURES, bundled_fixtures, main, run
from glsm_lab.report import emit


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def as_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv, "--format", "json")
    assert code == 0, err
    return json.loads(out)


def test_phases_quintic(capsys):
    d = as_json(capsys, "phases", "quintic_geometric")
    assert d["schema"] == "glsm-lab.report" and d["schema_version"] == 1
    res = d["result"]
    assert res["chamber_count"] == 2
    assert [c["unstable_locus"] for c in res["chambers"]] == [["{x1=x2=x3=x4=x5=0}"], ["{p=0}"]]
    assert d["warnings"] == []
    assert len(d["certificates"]) == 2 * (5 + 1) - 4  # 5+1 claims in tau>0, 1+1 in tau<0


def test_lifts_quintic_geometric(capsys):
    d = as_json(capsys, "lifts", "quintic_geometric")
    assert d["result"]["trivial_lift_good"] is True
    assert d["result"]["unique_good_r_level"] == "0"
    assert {c["direction"] for c in d["certificates"]} == {"r_level > 0", "r_level < 0"}
    d = as_json(capsys, "lifts", "quintic_geometric", "--lift", "1/3")
    assert d["result"]["queried_lift"] == {"r_level": "1/3", "good": False}


def test_vdim_quintic_lg(capsys):
    d = as_json(capsys, "vdim", "quintic_lg", "--genus", "0", "--marks", "3", "--beta", "0", "--insertions", "J,J,J")
    assert d["result"]["virtual_dimension"] == "3"
    assert d["command"] == "vdim --beta 0 --genus 0 --insertions J,J,J --marks 3"


def test_sectors_and_fixed_loci(capsys):
    d = as_json(capsys, "sectors", "quintic_lg")
    assert [s["age"] for s in d["result"]["sectors"]] == ["0", "1", "2", "3", "4"]
    d = as_json(capsys, "fixed-loci", "generalized_graph_space")
    assert d["result"]["count"] == 3
    d = as_json(capsys, "fixed-loci", "generalized_graph_space", "--extra-action", "0,0,0,0,0,0,0,0")
    assert d["result"]["count"] == 2


def test_qmap_commands(capsys):
    d = as_json(capsys, "qmap-check", "quintic_lg")
    assert d["result"]["stable"] and d["result"]["stable_curve"]
    d = as_json(capsys, "qmap-enumerate", "quintic_lg", "--max-degree", "2")
    assert d["result"]["count"] == 1
    d = as_json(capsys, "qmap-enumerate", "quintic_lg", "--max-degree", "2", "--epsilon", "0+")
    assert d["result"]["count"] == 3
    code, _, err = run_cli(capsys, "qmap-check", "quintic_geometric")
    assert code == 1 and "[graph]" in err


@pytest.mark.parametrize("name", bundled_fixtures())
def test_every_fixture_analyzes(capsys, name):
    d = as_json(capsys, "analyze", name)
    assert d["ok"]
    assert d["result"]["central_charge"]


def test_theta_override_moves_phase(capsys):
    d = as_json(capsys, "sectors", "quintic_lg", "--theta-override", "-1")
    assert d["result"]["sector_count"] == 1


def test_determinism(capsys):
    for fmt in ("json", "text"):
        first = run_cli(capsys, "analyze", "generalized_graph_space", "--format", fmt)
        assert run_cli(capsys, "analyze", "generalized_graph_space", "--format", fmt) == first
    rep1 = emit(run("analyze", "quintic_lg"), "json")
    rep2 = emit(run("analyze", "quintic_lg"), "json")
    assert rep1 == rep2
    assert b"." not in json.dumps(json.loads(rep1)["result"]["q"]).encode()


def test_exit_codes(capsys, tmp_path):
    code, _, err = run_cli(capsys, "phases", str(tmp_path / "missing.toml"))
    assert code == 1 and "not found" in err
    bad = tmp_path / "bad.toml"
    bad.write_text("[model]\nvariables = [1,,2]\nname = 3\n")
    code, _, err = run_cli(capsys, "validate", str(bad))
    assert code == 1 and "line" in err
    gcd = tmp_path / "gcd.toml"
    gcd.write_text((BUNDLED_FIXTURES / "quintic_geometric.toml").read_text().replace(
        "r_weights = [0, 0, 0, 0, 0, 1]", "r_weights = [2, 0, 0, 0, 0, 0]"))
    code, out, err = run_cli(capsys, "validate", str(gcd))
    assert code == 1 and "r_charge_gcd" in err and "FAILED" in out
    code, out, err = run_cli(capsys, "phases", str(gcd))
    assert code == 1 and "r_charge_gcd" in err
    code, _, err = run_cli(capsys, "vdim", "quintic_lg", "--insertions", "J,J", "--marks", "3")
    assert code == 1


def test_internal_error_exit_code(capsys, monkeypatch):
    import glsm_lab.cli as cli

    def boom(*a, **k):
        raise RuntimeError("kaboom")

    monkeypatch.setitem(cli._DISPATCH, "phases", boom)
    code, _, err = run_cli(capsys, "phases", "quintic_lg")
    assert code == 2 and "internal error" in err


def test_fixture_env_var(capsys, tmp_path, monkeypatch):
    (tmp_path / "mine.toml").write_text((BUNDLED_FIXTURES / "quintic_lg.toml").read_text())
    monkeypatch.setenv("GLSM_LAB_FIXTURES", str(tmp_path))
    d = as_json(capsys, "sectors", "mine")
    assert d["result"]["sector_count"] == 5


def test_console_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "glsm_lab", "phases", "quintic_lg", "--format", "json"],
        capture_output=True, check=True,
    )
    assert json.loads(proc.stdout)["result"]["chamber_count"] == 2
