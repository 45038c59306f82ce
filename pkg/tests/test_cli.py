import json
import subprocess
import sys

import pytest

from abtheme.cli import main

RANK2 = "generator e = s^(5/2)*L^1 + (1 + b)*s^(1/2);\nanalyze e;\n"
PUSH = ("generator e = s^(5/2)*L^1 + (1 + b)*s^(1/2);\n"
        "cov c = theta 2*a + a^2;\npushforward e by c;\n")


@pytest.fixture
def doc(tmp_path):
    def write(text, name="in.ab"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_analyze_json(doc, capsys):
    assert main(["analyze", doc(RANK2), "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["rank"] == 2
    assert data["lambda1"] == "5/2"
    assert data["p"] == [2]
    assert data["principal_params"] == ["-15/8"]


def test_analyze_text(doc, capsys):
    assert main(["analyze", doc(RANK2)]) == 0
    out = capsys.readouterr().out
    assert "rank: 2" in out and "principal parameters: -15/8" in out


def test_annihilator(doc, capsys):
    assert main(["annihilator", doc(RANK2), "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["rank"] == 2 and "a^2" in data["annihilator"]


def test_multiple_targets_give_list(doc, capsys):
    text = "generator e = s^(3/2);\ngenerator f = s^(5/2)*L^1 + s^(1/2);\n"
    assert main(["analyze", doc(text), "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert [d["name"] for d in data] == ["e", "f"]
    assert [d["rank"] for d in data] == [1, 2]


def test_pushforward(doc, capsys):
    assert main(["pushforward", doc(PUSH), "--format", "json", "--order", "16", "--check-order-margin", "0"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["pushed"]["principal_params"] == ["-15/32"]
    assert data["expected_params"] == ["-15/32"]
    assert data["routes_agree"] is True and data["ok"] is True


def test_pushforward_rank1_text(doc, capsys):
    text = "generator e = s^(3/2);\ncov c = subst t + t^2;\n"
    assert main(["pushforward", doc(text), "--order", "12", "--check-order-margin", "2"]) == 0
    assert "isomorphic to E_lambda: true" in capsys.readouterr().out


def test_syntax_error_exit_2(doc, capsys):
    assert main(["analyze", doc("generator e = s^(1/2)\n")]) == 2
    assert "line" in capsys.readouterr().err


def test_missing_file_exit_2(tmp_path, capsys):
    assert main(["analyze", str(tmp_path / "nope.ab")]) == 2


def test_missing_file_argument_exit_2(capsys):
    assert main(["analyze"]) == 2


def test_bad_order_exit_2(doc):
    assert main(["analyze", doc(RANK2), "--order", "2"]) == 2


def test_math_failure_exit_1(doc, capsys):
    # vanishing parameter: no rank-2 theme
    assert main(["analyze", doc("presentation P = [5/2, 7/2] [1];\n")]) == 1
    assert "Error" in capsys.readouterr().err


def test_entry_point_module(doc):
    proc = subprocess.run([sys.executable, "-m", "abtheme.cli", "analyze", doc(RANK2), "--format", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["rank"] == 2


def test_verify_suite_output(monkeypatch, capsys):
    import abtheme.suite as suite
    fake = [suite.CriterionResult(1, "one", True, "fine", 0.0), suite.CriterionResult(2, "two", False, "off", 0.0)]
    monkeypatch.setattr(suite, "run_suite", lambda: fake)
    assert main(["verify-suite"]) == 1
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("[PASS]  1 one") and out[1].startswith("[FAIL]  2 two")
    assert out[-1] == "1/2 criteria passed"
    assert main(["verify-suite", "--format", "json"]) == 1
    assert [d["passed"] for d in json.loads(capsys.readouterr().out)] == [True, False]
