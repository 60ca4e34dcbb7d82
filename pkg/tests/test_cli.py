import json
import math

import pytest

from betalpp.cli import rerun_manifest, run


def test_unknown_subcommand_is_usage_error(capsys):
    assert run(["frobnicate"]) == 1
    assert run(["tail", "--bogus-flag", "1"]) == 1


def test_missing_required_flag(capsys):
    assert run(["tail", "--m", "4"]) == 1


def test_tail_json_schema(tmp_path, capsys):
    out = tmp_path / "tail.json"
    code = run(
        [
            "tail", "--m", "8", "--n", "8", "--beta", "2", "--eps", "0.2",
            "--method", "importance", "--trials", "2000", "--seed", "7",
            "--format", "json", "--out", str(out),
        ]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"p_hat", "log_p_hat", "std_err", "trials", "seed", "method"}
    assert doc["trials"] == 2000 and doc["seed"] == 7 and doc["method"] == "importance"
    assert 0.0 < doc["p_hat"] < 1.0
    assert doc["log_p_hat"] == pytest.approx(math.log(doc["p_hat"]))


def test_manifest_rerun_byte_identical(tmp_path):
    out = tmp_path / "res.json"
    argv = [
        "tail", "--m", "8", "--n", "8", "--beta", "1", "--eps", "0.15",
        "--trials", "1000", "--seed", "3", "--out", str(out),
    ]
    assert run(argv) == 0
    first = out.read_bytes()
    man = out.with_name("res.json.manifest.json")
    assert man.exists()
    assert rerun_manifest(str(man)) == 0
    assert out.read_bytes() == first


def test_csv_json_value_equality(tmp_path):
    base = [
        "tail", "--m", "6", "--n", "6", "--beta", "1", "--eps", "0.2",
        "--trials", "500", "--seed", "11",
    ]
    j = tmp_path / "a.json"
    c = tmp_path / "a.csv"
    assert run(base + ["--format", "json", "--out", str(j)]) == 0
    assert run(base + ["--format", "csv", "--out", str(c)]) == 0
    doc = json.loads(j.read_text())
    header, row = c.read_text().strip().split("\n")
    cells = dict(zip(header.split(","), row.split(",")))
    assert float(cells["p_hat"]) == doc["p_hat"]
    assert float(cells["std_err"]) == doc["std_err"]
    assert int(cells["trials"]) == doc["trials"]


def test_float_serialization_17_digits(tmp_path):
    out = tmp_path / "t.json"
    assert run(
        ["tail", "--m", "4", "--n", "4", "--beta", "1", "--eps", "0.1",
         "--trials", "300", "--seed", "1", "--out", str(out)]
    ) == 0
    text = out.read_text()
    doc = json.loads(text)
    # round-trip: the printed decimal must parse back to the exact double
    for token in text.split():
        tok = token.rstrip(",")
        try:
            v = float(tok)
        except ValueError:
            continue
        assert repr(float(tok)) == repr(v)
    assert isinstance(doc["p_hat"], float)


def test_verify_loe_cli_passes(capsys):
    code = run(["verify-loe", "--n", "4", "--trials", "2000", "--seed", "1"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["pass"] is True
    assert doc["ks_stat"] < doc["critical_001"]


def test_env_seed_override(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("BETALPP_SEED", "99")
    assert run(["lpp", "--n", "3", "--trials", "4", "--seed", "5"]) == 0
    with_env = capsys.readouterr().out
    monkeypatch.delenv("BETALPP_SEED")
    assert run(["lpp", "--n", "3", "--trials", "4", "--seed", "99"]) == 0
    explicit = capsys.readouterr().out
    assert with_env == explicit
    monkeypatch.setenv("BETALPP_SEED", "not-an-int")
    assert run(["lpp", "--n", "3", "--trials", "4"]) == 1


def test_lil_csv_projection(tmp_path):
    out = tmp_path / "lil.csv"
    assert run(["lil", "--nmax", "64", "--seed", "2", "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "n,t_n,z_n,scaled_min,scaled_max"
    assert len(lines) == 1 + (64 - 16 + 1)


def test_dyadic_cli(capsys):
    assert run(["dyadic", "--k", "8", "--trials", "3", "--seed", "4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["scans"]) == 3
    assert all(s["sandwich_ok"] for s in doc["scans"])
    assert 0.0 <= doc["success_fraction"] <= 1.0


def test_gershgorin_cli(capsys):
    assert run(
        ["gershgorin", "--m", "6", "--n", "6", "--beta", "1", "--trials", "50",
         "--seed", "8", "--eps", "0.5"]
    ) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["violations"] == 0
    assert doc["max_ratio"] <= 1.0 + 1e-12
    assert doc["product_log_bound"] < 0.0


def test_sample_laguerre_cli(capsys):
    assert run(["sample-laguerre", "--m", "5", "--n", "3", "--beta", "2", "--trials", "10"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["samples"]) == 10
    assert all(0.0 < v < doc["edge"] * 3 for v in doc["samples"])
