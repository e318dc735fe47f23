import json
import os

import pytest

from cubicforms import cli

FERMAT3 = """n 3
R 1
backend exact
form 1
1 1 1 : 1
2 2 2 : 1
3 3 3 : 1
"""

NONDIAG3 = """n 3
R 1
backend exact
form 1
1 1 1 : 1
1 2 3 : 2
2 2 3 : -1
"""

MIXED8 = """n 8
R 1
backend exact
form 1
1 1 1 : 1
2 2 2 : 1
3 3 3 : 1
4 4 4 : 1
5 5 5 : -1
6 6 6 : -1
7 7 7 : -1
8 8 8 : -1
"""


@pytest.fixture
def forms(tmp_path):
    paths = {}
    for name, text in (("fermat3", FERMAT3), ("nondiag3", NONDIAG3), ("mixed8", MIXED8)):
        p = tmp_path / f"{name}.form"
        p.write_text(text)
        paths[name] = str(p)
    return paths


def test_count_aux_smoke(forms, tmp_path, capsys):
    out = tmp_path / "aux.csv"
    rc = cli.run(["count", "aux", "--form", forms["fermat3"], "--B", "8", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "B,count,strictness"
    assert lines[1] == "8,50653,strict"
    assert len(lines) == 2


def test_count_json_schema(forms, tmp_path):
    out = tmp_path / "aux.json"
    rc = cli.run(["count", "aux", "--form", forms["fermat3"], "--B", "4",
                  "--format", "json", "--out", str(out)])
    assert rc == 0
    obj = json.loads(out.read_text())
    assert obj["schema"] == 1
    assert obj["rows"][0]["count"] == 4913


def test_davenport_verify_json(forms, tmp_path):
    out = tmp_path / "dv.json"
    rc = cli.run(["davenport", "verify", "--form", forms["fermat3"], "--b", "2",
                  "--trials", "50", "--format", "json", "--out", str(out)])
    assert rc == 0
    obj = json.loads(out.read_text())
    assert obj["pass"] is True and obj["trials"] == 50


def test_circle_report_rows_and_figure(forms, tmp_path):
    out = tmp_path / "rep.csv"
    rc = cli.run(["circle", "report", "--form", forms["mixed8"], "--P", "2,4,8",
                  "--samples", "2e5", "--seed", "42", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "P,count,prediction,ratio"
    assert len(lines) == 4
    assert (tmp_path / "rep_ratios.png").exists()


def test_classify_histogram_figure(forms, tmp_path):
    out = tmp_path / "cls.csv"
    rc = cli.run(["classify", "--form", forms["nondiag3"], "--B", "3",
                  "--histogram", "--out", str(out)])
    assert rc == 0
    assert out.exists() and (tmp_path / "cls_classes.png").exists()


def test_trichotomy_and_dichotomy(forms, tmp_path):
    out = tmp_path / "tri.json"
    rc = cli.run(["trichotomy", "--form", forms["fermat3"], "--B", "8", "--C", "100",
                  "--sigma", "0", "--format", "json", "--out", str(out)])
    assert rc == 0
    obj = json.loads(out.read_text())
    assert obj["result"]["branch"] in ("I", "II", "III", "inconclusive")
    rc = cli.run(["davenport", "dichotomy", "--form", forms["fermat3"], "--B", "8",
                  "--C", "100", "--sigma", "0", "--out", str(tmp_path / "d.csv")])
    assert rc == 0


def test_byte_identical_reruns(forms, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["circle", "report", "--form", forms["mixed8"], "--P", "2,4",
            "--samples", "1e5", "--seed", "42"]
    assert cli.run(args + ["--out", str(a)]) == 0
    fig_a = (tmp_path / "a_ratios.png").read_bytes()
    assert cli.run(args + ["--out", str(b)]) == 0
    fig_b = (tmp_path / "b_ratios.png").read_bytes()
    assert a.read_bytes() == b.read_bytes()
    assert fig_a == fig_b


def test_threads_do_not_change_output(forms, tmp_path):
    a, b = tmp_path / "t1.csv", tmp_path / "t4.csv"
    base = ["count", "aux", "--form", forms["nondiag3"], "--B", "4"]
    assert cli.run(base + ["--threads", "1", "--out", str(a)]) == 0
    assert cli.run(base + ["--threads", "4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_env_threads_fallback(forms, tmp_path, monkeypatch):
    monkeypatch.setenv("CUBIC_AUX_THREADS", "2")
    out = tmp_path / "env.csv"
    assert cli.run(["count", "aux", "--form", forms["nondiag3"], "--B", "3",
                    "--out", str(out)]) == 0
    assert "count" in out.read_text()


def test_exit_codes(forms, tmp_path):
    # usage error
    assert cli.run(["count", "aux", "--form", forms["fermat3"]]) == 2
    # domain error: zero form
    zp = tmp_path / "zero.form"
    zp.write_text("n 2\nR 1\nbackend exact\nform 1\n")
    assert cli.run(["count", "aux", "--form", str(zp), "--B", "4"]) == 1
