import json
import subprocess
import sys

import pytest

from fermicone.cli import main


@pytest.fixture
def write(tmp_path):
    def _write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj), encoding="utf-8")
        return str(path)
    return _write


def run_json(capsys, argv):
    code = main(argv + ["--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def test_analyze_member(write, capsys):
    path = write("s.json", {"n": 4, "eigenvalues": [-1, "1/2", 1, 2], "numeric": "rational"})
    code, report = run_json(capsys, ["analyze", "--n-particles", "3", path])
    assert code == 0
    dec = report["decomposition"]
    assert dec["r"] == 1 and dec["gammas_by_label"] == ["3/2", 0, "1/2", "3/2"]
    assert dec["reconstruction_ok"] is True
    assert all(c["pass"] for c in report["cross_checks"].values())
    assert report["membership"]["certificate"] is None


def test_analyze_non_member_exit_2(write, capsys):
    path = write("s.json", {"n": 4, "N": 3, "eigenvalues": [-2, 0.5, 1, 5]})
    code, report = run_json(capsys, ["analyze", path])
    assert code == 2
    assert report["membership"]["certificate"] == [1, 2, 3]
    assert report["membership"]["min_pairing"] == "-1/2"


def test_analyze_text_report(write, capsys):
    path = write("s.json", {"N": 3, "eigenvalues": [-2, 1, 1, 1, 1]})
    assert main(["analyze", path]) == 0
    out = capsys.readouterr().out
    assert "hole_extreme(1) scaled by 3" in out and "reconstruction_ok=true" in out


@pytest.mark.parametrize(
    "content, fragment",
    [
        ('{"n": 3, "eigenvalues": [1, "x", 2], "N": 2}', "eigenvalues[1]"),
        ('{"n": 3, "eigenvalues": [1,', "line 1, column"),
        ('{"n": 4, "eigenvalues": [1, 2, 3], "N": 2}', "field 'n' = 4"),
        ('{"eigenvalues": [1, 2, 3]}', "no particle number"),
        ('{"eigenvalues": [1, 2, 3], "N": 5}', "must lie in 1..3"),
        ('[1, 2]', "top level"),
    ],
)
def test_analyze_input_errors_exit_1(write, capsys, content, fragment):
    path = write("bad.json", content)
    assert main(["analyze", path]) == 1
    assert fragment in capsys.readouterr().err


def test_float_mode_flag(write, capsys):
    path = write("s.json", {"N": 3, "eigenvalues": [-1.4, 0.5, 1, 5]})
    code, report = run_json(capsys, ["--numeric", "float", "--tolerance", "1e-9", "analyze", path])
    assert code == 0 and report["numeric"] == "float"
    assert abs(report["decomposition"]["t"] + 0.9) < 1e-12


def test_spectrum_command(write, capsys):
    path = write("s.json", {"N": 3, "eigenvalues": [-2, 1, 1, 1, 1]})
    code, report = run_json(capsys, ["spectrum", path])
    assert code == 0
    assert [(lv["eigenvalue"], lv["degeneracy"]) for lv in report["levels"]] == [(0, 6), (3, 4)]


def test_budget_flag(write, capsys):
    path = write("s.json", {"N": 3, "eigenvalues": [-2, 1, 1, 1, 1]})
    assert main(["--budget", "5", "spectrum", path]) == 1
    assert "budget" in capsys.readouterr().err


TYPE1 = {"N": 4, "beta": -1, "alphas": [3.5, 4, 4.5], "n": 8}
TYPE2 = {"N": 4, "beta": -2, "alpha": 0.5, "alphas": [7.5, 8], "n": 8}


def test_model_type1(write, capsys):
    code, report = run_json(capsys, ["model", "type1", write("p.json", TYPE1)])
    assert code == 0
    head = [(lv["eigenvalue"], lv["degeneracy"], lv["classification"]) for lv in report["levels"][:3]]
    assert head == [(0, 3, "ground"), (2, 2, "collective"), ("5/2", 3, "normal")]
    assert any("variant" in n for n in report["notes"])


def test_model_type2(write, capsys):
    code, report = run_json(capsys, ["model", "type2", write("p.json", TYPE2)])
    assert code == 0
    assert [lv["eigenvalue"] for lv in report["levels"][:4]] == [0, "1/2", "11/2", 6]


def test_model_thm74(write, capsys):
    params = {"n": 8, "N": 4, "r": 2, "m": 5, "betas": [-1, -1], "alphas_normal": [3.5, 4, 4.5]}
    code, report = run_json(capsys, ["model", "thm74", write("p.json", params)])
    assert code == 0
    assert report["checks"]["ground_degeneracy"] == {"pass": True, "observed": 3, "expected": 3}


def test_model_gap_violation_exit_3(write, capsys):
    bad = dict(TYPE1, alphas=[0.5, 4, 4.5])
    assert main(["model", "type1", write("p.json", bad)]) == 3
    err = capsys.readouterr().err
    assert "β + α_j > −2β" in err and "-1/2 <= 2" in err


def test_model_hypothesis_violation_exit_1(write, capsys):
    bad = dict(TYPE1, n=6)
    assert main(["model", "type1", write("p.json", bad)]) == 1
    assert "κ" in capsys.readouterr().err


def test_model_text_diagram(write, capsys):
    assert main(["model", "type1", write("p.json", TYPE1)]) == 0
    out = capsys.readouterr().out
    assert "collective |1 6 7 8> <- -1 +1 +1 +1" in out


PAIRED = {"n": 5, "N": 3, "terms": [{"occupied": [1, 2, 3], "re": 1}, {"occupied": [1, 4, 5], "re": 1, "im": 0}]}


def test_state_unnormalized_exit_1(write, capsys):
    assert main(["state", write("st.json", PAIRED)]) == 1
    assert "sum |c|^2 = 2" in capsys.readouterr().err


def test_state_report(write, capsys):
    spec = write("s.json", {"eigenvalues": [-2, 1, 1, 1, 1]})
    code, report = run_json(capsys, ["state", "--normalize", write("st.json", PAIRED), spec])
    assert code == 0
    assert report["occupations"] == [1, "1/2", "1/2", "1/2", "1/2"]
    assert report["factor_dimension"] == 1 and report["factors"] == [1]
    assert report["orbital_classes"]["1"] == "particle" and report["orbital_classes"]["2"] == "neither"
    assert report["identity_check"]["pass"] is True


def test_state_determinant(write, capsys):
    st = {"n": 4, "N": 2, "terms": [{"occupied": [2, 4], "re": 0, "im": 1}]}
    spec = write("s.json", {"eigenvalues": [-1, 3, 5, 7]})
    code, report = run_json(capsys, ["state", write("st.json", st), spec])
    assert code == 0
    assert report["occupations"] == [0, 1, 0, 1] and report["factor_dimension"] == 2
    assert report["expectation"] == 10


def test_check_suite_filter_and_determinism(capsys):
    code, first = run_json(capsys, ["check", "--suite", "lemma31", "--trials", "20"])
    assert code == 0
    assert [s["suite"] for s in first["suites"]] == ["lemma31"]
    _, second = run_json(capsys, ["check", "--suite", "lemma31", "--trials", "20"])
    assert first == second


def test_console_script_roundtrip(write):
    path = write("s.json", {"N": 3, "eigenvalues": [-2, 0.5, 1, 5]})
    out = subprocess.run(
        [sys.executable, "-m", "fermicone.cli", "analyze", path, "--format", "json"],
        capture_output=True, text=True,
    )
    assert out.returncode == 2
    assert json.loads(out.stdout)["membership"]["member"] is False
