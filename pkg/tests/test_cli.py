"""Command-line interface: exit codes, reports, file pipelines."""

import json
import random

import pytest

from weilforms import cli
from weilforms.containers import dumps, jacobi_to_json, loads, scalar_to_json
from weilforms.discform import DiscriminantForm
from weilforms.expansions import theta_expansion
from weilforms.jacobi import random_jacobi_form
from weilforms.metaplectic import parse_word
from weilforms.weilrep import rho_eval


def run(argv):
    try:
        return cli.main(argv)
    except SystemExit as err:
        return err.code


def test_milgram_pass_and_control():
    assert run(["milgram", "--m", "6"]) == 0
    assert run(["milgram", "--m", "6", "--signature", "2,2"]) == 2


def test_usage_errors_exit_1(capsys):
    assert run(["milgram"]) == 1
    assert run(["no-such-command"]) == 1
    assert run(["milgram", "--m", "3", "--signature", "fish"]) == 1
    assert run(["eval", "--builtin", "nope"]) == 1
    capsys.readouterr()


def test_rho_report_matches_direct_matrix(tmp_path, capsys):
    out = tmp_path / "rho.json"
    assert run(["rho", "--m", "2", "--word", "S T T S'", "--json", str(out)]) == 0
    capsys.readouterr()
    report = loads(out.read_text())
    assert report["overall"] is True
    want = rho_eval(
        DiscriminantForm(2), parse_word("S T T S'").to_element()).to_json_dict()
    assert report["result"]["matrix"] == want


def test_split_combine_pipeline(tmp_path, capsys):
    f = theta_expansion(60)
    src = tmp_path / "theta.json"
    src.write_text(dumps(scalar_to_json(f, 1, 0)))
    mid = tmp_path / "vector.json"
    back = tmp_path / "back.json"
    assert run(["split", "--in", str(src), "--out", str(mid)]) == 0
    assert run(["check-T", "--in", str(mid)]) == 0
    assert run(["combine", "--in", str(mid), "--out", str(back)]) == 0
    assert run(["check-plus", "--in", str(back)]) == 0
    capsys.readouterr()
    assert loads(back.read_text()) == scalar_to_json(f, 1, 0)


def test_check_S_builtin_theta(capsys):
    assert run(["check-S", "--builtin", "theta"]) == 0
    out = capsys.readouterr().out
    assert "overall: pass" in out


def test_jacobi_file_roundtrip(tmp_path, capsys):
    phi = random_jacobi_form(2, 3, random.Random(99))
    src = tmp_path / "phi.json"
    src.write_text(dumps(jacobi_to_json(phi)))
    mid = tmp_path / "components.json"
    back = tmp_path / "back.json"
    assert run(["jacobi-decompose", "--in", str(src), "--out", str(mid)]) == 0
    assert run(["jacobi-reconstruct", "--in", str(mid), "--out", str(back)]) == 0
    capsys.readouterr()
    assert back.read_bytes() == src.read_bytes()


def test_jacobi_thm2_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.json"
    good.write_text(dumps(jacobi_to_json(random_jacobi_form(2, 3, random.Random(5)))))
    assert run(["jacobi-thm2", "--in", str(good)]) == 0
    odd = tmp_path / "odd.json"
    odd.write_text(dumps(jacobi_to_json(random_jacobi_form(3, 3, random.Random(5)))))
    assert run(["jacobi-thm2", "--in", str(odd)]) == 1
    capsys.readouterr()


def test_selftest_deterministic_json(tmp_path, capsys):
    a, b, c = (tmp_path / n for n in ("a.json", "b.json", "c.json"))
    assert run(["selftest", "--json", str(a)]) == 0
    assert run(["selftest", "--json", str(b)]) == 0
    assert run(["selftest", "--seed", "7", "--json", str(c)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes() != c.read_bytes()
    report = json.loads(a.read_text())
    assert report["overall"] is True
    assert all(chk["pass"] for chk in report["checks"])


def test_precision_env_gate(capsys, monkeypatch):
    argv = ["rho", "--m", "1", "--word", "S"]
    monkeypatch.setenv("WEIL_PRECISION_BITS", "40")
    assert run(argv) == 1
    monkeypatch.setenv("WEIL_PRECISION_BITS", "junk")
    assert run(argv) == 1
    monkeypatch.setenv("WEIL_PRECISION_BITS", "192")
    assert run(argv) == 0
    capsys.readouterr()


def test_rank_lemma_report_fields(tmp_path, capsys):
    out = tmp_path / "rank.json"
    assert run(["rank-lemma", "--m", "5", "--json", str(out)]) == 0
    capsys.readouterr()
    result = loads(out.read_text())["result"]
    assert result["rank"] == 6
    assert result["claimed_rank"] == 8
    assert result["rank_matches_claim"] is False
    assert result["distinct_columns_independent"] is True


def test_heat_and_gauss_commands(capsys):
    assert run(["heat-check", "--m", "7", "--r", "13"]) == 0
    assert run(["gauss-check", "--m", "6"]) == 0
    assert run(["b-entry", "--m", "3", "--beta", "1", "--gamma", "5"]) == 0
    capsys.readouterr()
