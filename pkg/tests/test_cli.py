import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from jetcalc.cli import COMMANDS, main
from jetcalc.errors import ParseError
from jetcalc.jobfile import parse_job

JOBS = Path(__file__).resolve().parent.parent / "jobs"

PLANE = """jetcalc/1
space R = x, y
"""


def run(tmp_path, capsys, text, *flags):
    path = tmp_path / "job.txt"
    path.write_text(text)
    code = main([str(path), *flags])
    out, err = capsys.readouterr()
    return code, out, err


def result(tmp_path, capsys, text, *flags):
    code, out, err = run(tmp_path, capsys, text, *flags)
    assert code == 0, err
    report = json.loads(out)
    assert report["format"] == "jetcalc-report/1"
    return report["result"]


# -- one job per command -------------------------------------------------------------


def test_gb(tmp_path, capsys):
    text = "jetcalc/1\nspace R = x, y, z\nideal I in R = y - x^2, z - x^3\ncommand gb ideal=I order=lex\n"
    res = result(tmp_path, capsys, text)
    assert res["order"] == "lex" and "y^3 - z^2" in res["basis"]


def test_nf(tmp_path, capsys):
    text = "jetcalc/1\nspace R = x, y, z\nideal I in R = x*z - 1\npoly p in R = x*y\ncommand nf poly=p ideal=I\n"
    assert result(tmp_path, capsys, text) == {"normal_form": "x*y", "member": False}


def test_eliminate(tmp_path, capsys):
    text = "jetcalc/1\nspace S = x, y, u, v\nideal G in S = x, u - x, v - x*y\ncommand eliminate ideal=G drop=x,y\n"
    res = result(tmp_path, capsys, text)
    assert res["ring"] == ["u", "v"] and sorted(res["ideal"]) == ["u", "v"]


def test_dim_of_variety(tmp_path, capsys):
    text = PLANE + "variety C in R = y^2 - x^3\ncommand dim variety=C\n"
    assert result(tmp_path, capsys, text) == {"dimension": 1}


def test_initial_form(tmp_path, capsys):
    text = PLANE + "poly p in R = x + x^2*y\ncommand initial-form poly=p\n"
    assert result(tmp_path, capsys, text) == {"initial_form": "x"}


def test_jacobian(tmp_path, capsys):
    text = PLANE + "map g: R -> R = x^2, y^2\ncommand jacobian map=g at=1,2\n"
    res = result(tmp_path, capsys, text)
    assert res["determinant"] == "4*x*y"
    assert res["at"] == [["2", "0"], ["0", "4"]]


def test_jet_prolong(tmp_path, capsys):
    text = PLANE + "map g: R -> R = x, x*y\njet j in R = [0, 1, 0], [0, 1, 1]\ncommand jet-prolong map=g jet=j\n"
    res = result(tmp_path, capsys, text)
    assert res["jet"] == [["0", "1", "0"], ["0", "0", "1"]]


def test_jet_dim(tmp_path, capsys):
    text = PLANE + "map g: R -> R = x, x*y\ncommand jet-dim map=g k=2 at=0,0\n"
    res = result(tmp_path, capsys, text, "--seed", "3")
    assert res["dimension"] == 3 and res["constrained"] is False


def test_jet_dim_on_a_variety(tmp_path, capsys):
    text = "jetcalc/1\nspace A = x, y, z\nvariety X in A = x*z - 1 @ 1, 1, 1\nmap id: A -> A = x, y, z\nset seed = 1\ncommand jet-dim map=id variety=X k=2\n"
    res = result(tmp_path, capsys, text)
    assert res["dimension"] == 4 and res["constrained"] is True


def test_multiplicity(tmp_path, capsys):
    text = PLANE + "jet j in R = [0, 0, 1, 0], [0, 0, 0, 1]\ncommand multiplicity jet=j\n"
    assert result(tmp_path, capsys, text) == {"multiplicity": 2}
    text = PLANE + "jet j in R = [0, 0], [0, 0]\ncommand multiplicity jet=j\n"
    assert result(tmp_path, capsys, text) == {"multiplicity": None}


def test_tangent_cone_job_file(capsys):
    assert main([str(JOBS / "cusp_cone.job")]) == 0
    assert json.loads(capsys.readouterr().out)["result"]["ideal"] == ["y^2"]


def test_lift(tmp_path, capsys):
    text = PLANE + "variety C in R = y^2 - x^3\njet j in R = [0, 0], [0, 1]\ncommand lift variety=C jet=j K=2\n"
    res = result(tmp_path, capsys, text)
    assert res["status"] == "obstructed" and res["obstruction_order"] == 2 and res["witness"] is None


def test_stratum_dim_with_buffer_flag(tmp_path, capsys):
    text = PLANE + "variety C in R = y^2 - x^3\ncommand stratum-dim variety=C k=2 m=2\n"
    assert result(tmp_path, capsys, text) == {"dimension": 1, "k": 2, "m": 2, "K": 6}
    assert result(tmp_path, capsys, text, "--buffer", "5")["K"] == 5


def test_strict_transform(tmp_path, capsys):
    text = PLANE + "poly h in R = y^2 - x^3\ncommand strict-transform poly=h chart=2\n"
    res = result(tmp_path, capsys, text)
    assert res["power"] == 2 and res["transform"] == "-x^3*y + 1"


def test_theta(tmp_path, capsys):
    text = PLANE + "jet j in R = [0, 1, 0], [0, 1, 0]\ncommand theta jet=j l=1\n"
    res = result(tmp_path, capsys, text)
    assert res["chart"]["index"] == 1 and res["point"] == ["0", "1"]
    assert res["image"] == [["0", "1"], ["1", "0"]]


def test_chart_map(tmp_path, capsys):
    text = PLANE + "map g: R -> R = x^2, y^2\ncommand chart-map map=g source=1 target=1 at=0,0\n"
    res = result(tmp_path, capsys, text)
    assert res["text"] == "(x^2, y^2)" and res["regular_at"] is True


def test_jd_job_file(capsys):
    assert main([str(JOBS / "identity_jd.job")]) == 0
    assert json.loads(capsys.readouterr().out)["result"] == {"jd": 0}


def test_jd_infinite(tmp_path, capsys):
    text = PLANE + "map g: R -> R = x + y, x + y\ncommand jd map=g\n"
    assert result(tmp_path, capsys, text) == {"jd": "inf"}


def test_analyze_counterexample(capsys):
    assert main([str(JOBS / "counterexample.job")]) == 0
    res = json.loads(capsys.readouterr().out)["result"]
    assert res["commutativity"] is True
    [cand] = res["candidates"]
    assert cand["divisor"] == "V(u)" and cand["exceptional"] and cand["image_dimension"] == 0
    assert cand["invariant"] and cand["preimage_empty"]


def test_verify(tmp_path, capsys):
    text = "jetcalc/1\ncommand verify suite=algebra samples=3\n"
    res = result(tmp_path, capsys, text, "--seed", "2")
    assert res["passed"] is True
    assert {c["name"] for c in res["checks"]} >= {"parse-roundtrip", "membership"}


def test_every_command_is_exercised():
    names = {n.removeprefix("test_").replace("_", "-") for n in globals() if n.startswith("test_")}
    covered = {c for c in COMMANDS if any(n.startswith(c) for n in names)}
    assert covered == set(COMMANDS)


# -- configuration, output and exit codes ------------------------------------------------


def test_reports_are_byte_identical(tmp_path, capsys):
    job = (JOBS / "counterexample.job").read_text()
    first = run(tmp_path, capsys, job)[1]
    second = run(tmp_path, capsys, job)[1]
    assert first == second


def test_parameters_are_embedded(tmp_path, capsys):
    text = PLANE + "set bound = 50\nmap g: R -> R = x, x*y\ncommand jet-dim map=g k=1\n"
    code, out, _ = run(tmp_path, capsys, text, "--seed", "9", "--trials", "3", "--bound", "20")
    params = json.loads(out)["parameters"]
    assert params["seed"] == 9 and params["trials"] == 3 and params["bound"] == 20
    assert params["buffer"] == "k+4" and params["command"] == {"map": "g", "k": "1"}


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    assert main([str(JOBS / "cusp_cone.job"), "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["command"] == "tangent-cone"


def test_stdin(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO((JOBS / "identity_jd.job").read_text()))
    assert main(["-"]) == 0
    assert json.loads(capsys.readouterr().out)["result"] == {"jd": 0}


def test_parse_error_has_line_and_column(tmp_path, capsys):
    code, out, err = run(tmp_path, capsys, PLANE + "poly p in R = y^^2\ncommand initial-form poly=p\n")
    assert code == 2 and out == ""
    assert "(line 3, column 17)" in err and "[cli]" in err


def test_randomized_command_needs_seed(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, PLANE + "map g: R -> R = x, y\ncommand jet-dim map=g k=1\n")
    assert code == 2 and "seed" in err


def test_module_attribution(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, PLANE + "variety C in R = y^2 - x^3 @ 1, 2\ncommand dim variety=C\n")
    assert code == 2 and "[varieties]" in err and "line 3" in err
    code, _, err = run(tmp_path, capsys, PLANE + "jet j in R = [0, 0], [0, 0]\ncommand theta jet=j l=0\n")
    assert code == 2 and "[blowup]" in err


def test_fail_fast_on_findings(tmp_path, capsys):
    text = PLANE + "variety P in R =\nmap g: R -> R = x, x*y\nmap id: R -> R = x, y\nset seed = 1\ncommand analyze X=P Y=P rho=id f=g g=g s_max=1 k=1\n"
    assert run(tmp_path, capsys, text)[0] == 0
    assert run(tmp_path, capsys, text, "--fail-fast")[0] == 1


def test_missing_file(capsys):
    assert main(["/nonexistent/job"]) == 2


@pytest.mark.parametrize(
    "text, message",
    [
        ("space R = x\n", "header"),
        ("jetcalc/1\nspace R = x\n", "no command"),
        ("jetcalc/1\ncommand dim variety=C\n", "undeclared"),
        ("jetcalc/1\nspace R = x\nspace R = y\ncommand dim ideal=R\n", "already declared"),
        ("jetcalc/1\nspace R = x\nmap g: R -> R = x, x\ncommand jd map=g\n", "components"),
        ("jetcalc/1\nspace R = x\ncommand frobnicate\n", None),
        ("jetcalc/1\nspace R = x\nwidget w = 1\ncommand dim ideal=w\n", "unrecognized"),
        ("jetcalc/1\nspace R = x\nset colour = red\ncommand dim ideal=R\n", None),
    ],
)
def test_job_errors(tmp_path, capsys, text, message):
    code, _, err = run(tmp_path, capsys, text)
    assert code == 2
    if message:
        assert message in err


def test_job_parser_structure():
    job = parse_job((JOBS / "counterexample.job").read_text())
    assert job.command == "analyze" and job.settings == {"seed": "7"}
    assert job.get("X", "variety").base_point == (1, 1, 1)
    with pytest.raises(ParseError):
        job.get("X", "map")


def test_console_script_and_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "jetcalc", str(JOBS / "identity_jd.job")], capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["result"] == {"jd": 0}
    out = subprocess.run([sys.executable, "-m", "jetcalc", "--version"], capture_output=True, text=True, check=True)
    assert out.stdout.startswith("jetcalc ")
