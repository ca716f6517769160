import csv
import json
from pathlib import Path

import jsonschema
import pytest

from matroid_modulus import cli

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
SCHEMA = json.loads((ROOT / "docs" / "report.schema.json").read_text())
FIXTURE_FILES = ["tp.txt", "u12.txt", "k4.txt", "path3.txt"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def analyze(capsys, *argv):
    code, out, _ = run(capsys, "analyze", *argv)
    assert code == 0
    return json.loads(out)


def test_analyze_tp(capsys):
    rep = analyze(capsys, str(DATA / "tp.txt"))
    assert rep["mod_p"]["2"] == "3/7" and rep["mod2"] == "3/7" and rep["meo"] == "7/3"
    assert rep["strength"] == {"value": "1", "witness": ["d"]}
    assert rep["arboricity"] == {"value": "3/2", "witness": ["a", "b", "c"]}
    assert rep["eta_star"] == {"a": "2/3", "b": "2/3", "c": "2/3", "d": "1"}
    assert rep["rho_star"] == {"a": "2/7", "b": "2/7", "c": "2/7", "d": "3/7"}
    assert (rep["theta"], rep["tau"], rep["upsilon"]) == ("4/3", "1", "3/2")
    assert rep["critical_values"] == ["2/3", "1"]
    assert rep["homogeneous"] is False
    assert rep["dual"]["eta_dual"] == {"a": "1/3", "b": "1/3", "c": "1/3", "d": "0"}
    assert len(rep["theta_family"]) == 5


def test_analyze_uniform(capsys):
    rep = analyze(capsys, str(DATA / "u12.txt"))
    assert rep["homogeneous"] is True
    assert set(rep["eta_star"].values()) == {"1/2"}


def test_analyze_path_theta(capsys):
    rep = analyze(capsys, str(DATA / "path3.txt"))
    assert rep["theta_family"] == [{"elements": [e], "denom": 1} for e in ("e1", "e2", "e3")]
    assert "dual" not in rep


def test_analyze_p_list(capsys):
    rep = analyze(capsys, str(DATA / "tp.txt"), "--p", "2,3,3/2")
    assert sorted(rep["mod_p"]) == ["2", "3", "3/2"]
    num = rep["numeric"]["mod_p"]["3"]
    assert num["closed_form"] == pytest.approx((2 ** 1.5 / 3 ** 0.5 + 1) ** -2, rel=1e-12)
    assert num["convex_solve"] == pytest.approx(num["closed_form"], rel=1e-6)


@pytest.mark.parametrize("name", FIXTURE_FILES)
def test_report_schema_and_determinism(capsys, name):
    first = run(capsys, "analyze", str(DATA / name))[1]
    second = run(capsys, "analyze", str(DATA / name))[1]
    assert first == second
    jsonschema.validate(json.loads(first), SCHEMA)


def test_stdin(capsys, monkeypatch):
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO((DATA / "tp.txt").read_text()))
    code, out, _ = run(capsys, "analyze", "-")
    assert code == 0 and json.loads(out)["mod2"] == "3/7"


def test_csv(capsys, tmp_path):
    analyze(capsys, str(DATA / "tp.txt"), "--csv", str(tmp_path))
    with open(tmp_path / "densities.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert rows[3] == {"element": "d", "eta_star": "1", "rho_star": "3/7"}
    with open(tmp_path / "theta_family.csv") as fh:
        theta = list(csv.DictReader(fh))
    assert theta[-1] == {"elements": "a b c", "denom": "2"}


def test_verify_tp(capsys):
    code, out, _ = run(capsys, "verify", str(DATA / "tp.txt"))
    assert code == 0
    assert out.splitlines()[-1].endswith("0 failed")


def test_verify_random_seed7(capsys, tmp_path):
    path = tmp_path / "r7.txt"
    code, text, _ = run(capsys, "random", "--seed", "7", "--size", "6")
    path.write_text(text)
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0 and "FAIL" not in out


def test_verify_failure_exits_nonzero(capsys, monkeypatch):
    from matroid_modulus import checks
    monkeypatch.setattr(checks, "CHECKS", checks.CHECKS + [("demo", "always fails", lambda inst: "broken")])
    code, out, _ = run(capsys, "verify", str(DATA / "u12.txt"))
    assert code == 4
    assert "FAIL [demo] always fails: broken" in out


def test_bad_exchange(capsys):
    code, _, err = run(capsys, "verify", str(DATA / "bad_exchange.txt"))
    assert code == 2
    assert "['a', 'b'] and ['c', 'd']" in err


def test_parse_error_line(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1 2 a\n1 2\n")
    code, _, err = run(capsys, "analyze", str(path), "--format", "graph")
    assert code == 2 and "line 2" in err


def test_missing_file(capsys):
    assert run(capsys, "analyze", "/nonexistent/file")[0] == 2


def test_bad_p(capsys):
    assert run(capsys, "analyze", str(DATA / "tp.txt"), "--p", "1")[0] == 2


def test_caps(capsys):
    assert run(capsys, "--caps", "bases=3", "analyze", str(DATA / "k4.txt"))[0] == 3
    assert run(capsys, "--caps", "widgets=3", "analyze", str(DATA / "k4.txt"))[0] == 2


def test_random_golden(capsys):
    golden = (Path(__file__).parent / "golden" / "random_seed1_graphic6.txt").read_text()
    assert run(capsys, "random", "--seed", "1", "--family", "graphic", "--size", "6")[1] == golden
    assert run(capsys, "random", "--seed", "1", "--family", "graphic", "--size", "6")[1] == golden


def test_random_linear_roundtrip(capsys, tmp_path):
    code, text, _ = run(capsys, "random", "--seed", "3", "--family", "linear", "--size", "5")
    path = tmp_path / "lin.txt"
    path.write_text(text)
    assert code == 0
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == 0
    assert len(json.loads(out)["ground"]) == 5


def test_random_over_cap(capsys):
    assert run(capsys, "random", "--size", "21")[0] == 3
