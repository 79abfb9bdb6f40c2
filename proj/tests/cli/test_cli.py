import json
import math
import os
import subprocess

import pytest

CLI = os.environ.get("TRIGEQ_CLI", "trigeq")


def run(*args, cwd=None):
    return subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd)


def run_json(*args):
    r = run(*args)
    assert r.returncode == 0, r.stderr
    return json.loads(r.stdout)


def test_dts_tables():
    d = run_json("dts", "--order", "6")
    assert len(d["functions"]) == 6
    assert d["functions"][1]["cells"][3] == {"num": 1, "mod": 2}
    m = run_json("dts", "--moduli", "2,3")
    assert m["order"] == 6
    assert len(m["functions"]) == 6


def test_dts_coefficients():
    d = run_json("dts", "--order", "2", "--coeffs", "--mmax", "4")
    t1 = {t["m"]: t for t in d["coefficients"][1]["terms"]}
    assert abs(t1[1]["re"]) < 1e-10
    assert abs(t1[1]["im"] + 2 / math.pi) < 1e-10
    assert t1[2]["re"] == 0 and t1[2]["im"] == 0
    assert d["quadrature_check"]["passed"]
    assert d["quadrature_check"]["tolerance"] == 1e-10


def test_crt_map(tmp_path):
    out = tmp_path / "cells.json"
    r = run("crt-map", "--moduli", "3,5", "--emit", str(out))
    assert r.returncode == 0
    cells = json.loads(out.read_text())
    assert len(cells) == 15
    assert sorted(c["to"] for c in cells) == list(range(15))
    assert run("crt-map", "--moduli", "4,6").returncode == 2


def test_verify_equiv():
    d = run_json("verify-equiv", "--moduli", "3,5")
    assert d["passed"] and d["prob_equiv"]
    assert d["cells_checked"] == 15
    assert d["axioms"]["seed"] == 1


def test_reduce_offsets_and_roundtrip(tmp_path):
    idx = tmp_path / "idx.json"
    idx.write_text(json.dumps([[3, -1], [0, 2], [5, 5], [-4, 1], [2, 2], [7, -3], [1, 1], [-2, -6]]))
    plan = tmp_path / "plan.json"
    r = run("reduce", "--input", str(idx), "--n", "8", "--mode", "rc", "--out", str(plan))
    assert r.returncode == 0, r.stderr
    p = json.loads(plan.read_text())
    assert p["offsets"][:8] == [0, 1, 5, 9, 25, 41, 57, 73]
    assert p["structure"]["passed"]
    chk = run_json("check-plan", "--plan", str(plan), "--certificates")
    assert chk["roundtrip_identical"] and chk["passed"]


def test_reduce_is_deterministic(tmp_path):
    a = run("reduce", "--n", "64", "--dim", "2", "--seed", "7")
    b = run("reduce", "--n", "64", "--dim", "2", "--seed", "7")
    c = run("reduce", "--n", "64", "--dim", "2", "--seed", "8")
    assert a.returncode == 0
    assert a.stdout == b.stdout
    assert a.stdout != c.stdout
    assert json.loads(a.stdout)["run"]["seed"] == 7


def test_tampered_plan_is_rejected(tmp_path):
    plan = tmp_path / "plan.json"
    assert run("reduce", "--n", "16", "--dim", "1", "--out", str(plan)).returncode == 0
    p = json.loads(plan.read_text())
    p["blocks"][2]["members"][0]["terms"][0]["re"] += 1e-3
    plan.write_text(json.dumps(p))
    r = run("check-plan", "--plan", str(plan))
    assert r.returncode == 2
    assert "differs" in r.stderr


def test_coeffs_weight_transfer(tmp_path):
    plan = tmp_path / "plan.json"
    assert run("reduce", "--n", "256", "--dim", "2", "--radius", "10", "--compact", "--out", str(plan)).returncode == 0
    d = run_json("coeffs", "--plan", str(plan), "--w", "log2", "--c-max", "17")
    assert d["holds"] and d["lhs"] <= d["c_star"] * d["rhs"]
    assert d["c_star"] <= 17
    r = run("coeffs", "--plan", str(plan), "--w", "log2", "--c-max", "1")
    assert r.returncode == 1


def test_maxima_csv(tmp_path):
    plan = tmp_path / "plan.json"
    assert run("reduce", "--n", "127", "--dim", "1", "--radius", "200", "--compact", "--out", str(plan)).returncode == 0
    a = tmp_path / "a.json"
    a.write_text(json.dumps([1 / n for n in range(1, 128)]))
    csv = tmp_path / "report.csv"
    svg = tmp_path / "report.svg"
    r = run("maxima", "--plan", str(plan), "--coeffs", str(a), "--kmax", "6", "--grid", "512", "--out", str(csv),
            "--plot", str(svg))
    assert r.returncode == 0, r.stderr
    lines = csv.read_text().splitlines()
    assert lines[0] == "k,sup_Mk,mean_Mk,q50,q90,q99"
    assert len(lines) == 8
    assert svg.read_text().startswith("<svg")


def test_weight_check():
    d = run_json("weight-check", "--w", "log2", "--n", "1000000")
    assert d["doubling_constant"] <= 4.2
    assert not d["doubling_flagged"]
    assert run("weight-check", "--w", "pow:1", "--n", "1000", "--c-max", "4.2").returncode == 1


def test_usage_errors(tmp_path):
    assert run().returncode == 2
    assert run("reduce", "--n", "8", "--input", str(tmp_path / "missing.json")).returncode == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "dim": 2,\n  "indices": [[1, 2],\n')
    r = run("reduce", "--n", "1", "--input", str(bad))
    assert r.returncode == 2
    assert "line 4" in r.stderr
    assert run("weight-check", "--w", "cube", "--n", "10").returncode == 2


@pytest.mark.parametrize("args", [
    ("dts", "--order", "4", "--coeffs", "--mmax", "3", "--spectrum", "2"),
    ("verify-equiv", "--moduli", "2,3,5"),
    ("weight-check", "--w", "log", "--n", "5000"),
])
def test_reports_are_deterministic(args):
    r = run(*args)
    assert r.returncode == 0
    json.loads(r.stdout)
    assert run(*args).stdout == r.stdout
