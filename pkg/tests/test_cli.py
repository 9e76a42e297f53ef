import io
import json
import math

import pytest

from bellcheck.catalog import shipped_path
from bellcheck.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def structured(*argv):
    code, text = run("--format", "structured", *argv)
    return code, json.loads(text)


def test_check_deterministic_model_all_hold():
    code, rep = structured("check", str(shipped_path("deterministic_anticorrelated")))
    assert code == 0
    assert [v["holds"] for v in rep["verdicts"]] == [True] * 4
    assert len(rep["verdicts"][3]["events"]) == 3


def test_check_singlet_sampled():
    code, rep = structured("check", "singlet_sampled")
    v = {x["condition"]: x for x in rep["verdicts"]}
    assert code == 1
    assert v["no_signalling"]["holds"] and not v["passive_locality"]["holds"]


def test_check_selected_conditions():
    code, rep = structured("check", "singlet_sampled", "--conditions", "no_signalling,active")
    assert code == 0 and len(rep["verdicts"]) == 2


def test_check_cancellation_prints_witness():
    code, text = run("check", "cancellation")
    assert code == 1
    assert "active_locality" in text and "witness" in text and "remote axis" in text


def test_malformed_file_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.toml"
    p.write_text("mode = \n", encoding="utf-8")
    code, _ = run("check", str(p))
    assert code == 2
    assert "line 1" in capsys.readouterr().err


def test_unknown_condition_exit_2():
    assert run("check", "two_lambda", "--conditions", "bogus")[0] == 2


def test_chsh_quantum_preset():
    code, rep = structured("chsh", "--quantum", "--preset", "optimal")
    assert code == 0
    assert abs(rep["analytic"]["lhs"] - 2 * math.sqrt(2)) < 1e-9
    assert rep["analytic"]["violated"]


def test_chsh_angles_and_axes():
    _, a = structured("chsh", "--quantum", "--angles", "90,0,45,135")
    _, b = structured("chsh", "--quantum", "--axes", "1,0,0;0,0,1;0.7071067811865476,0,0.7071067811865476;0.7071067811865476,0,-0.7071067811865476")
    assert abs(a["analytic"]["lhs"] - b["analytic"]["lhs"]) < 1e-9


def test_chsh_unnormalized_axes_exit_2():
    assert run("chsh", "--quantum", "--axes", "1,0,0;0,0,1;0,0,1;0,0,1.01")[0] == 2
    assert run("chsh", "--quantum", "--axes", "1,0,0;0,0,1;0,0,1")[0] == 2


def test_chsh_local_model_bounded():
    code, rep = structured("chsh", "deterministic_anticorrelated", "--indices", "0,1,1,2")
    assert code == 0 and not rep["analytic"]["violated"]


def test_chsh_needs_exactly_one_source():
    assert run("chsh")[0] == 2
    assert run("chsh", "two_lambda", "--quantum")[0] == 2


def test_chsh_simulation_reproducible():
    args = ("chsh", "--quantum", "--simulate", "20000", "--seed", "42")
    c1, t1 = run("--format", "structured", *args)
    c2, t2 = run("--format", "structured", *args)
    assert c1 == c2 == 0 and t1 == t2
    emp = json.loads(t1)["empirical"]
    assert abs(emp["lhs"] - 2 * math.sqrt(2)) < 4 * emp["std_err"]


def test_global_flags_after_subcommand():
    _, a = run("--format", "structured", "--seed", "3", "simulate", "two_lambda", "--trials", "5")
    _, b = run("simulate", "two_lambda", "--trials", "5", "--format", "structured", "--seed", "3")
    assert json.loads(a)["settings"] == json.loads(b)["settings"]


def test_bell_and_three_axis():
    _, rep = structured("bell", "--quantum", "--angles", "0,60,120")
    assert abs(rep["analytic"]["lhs"] - 1.5) < 1e-9
    _, rep = structured("three-axis", "--quantum")
    assert abs(rep["analytic"]["lhs"] - 1.125) < 1e-9
    code, rep = structured("three-axis", "deterministic_anticorrelated")
    assert rep["analytic"]["lhs"] == "1" and not rep["analytic"]["violated"]


def test_polytope_commands():
    assert structured("polytope")[1]["max_lhs"] == "2"
    assert structured("polytope", "--inequality", "three-axis")[1]["max_lhs"] == "1"
    assert structured("polytope", "--n1", "1", "--n2", "1")[1]["max_lhs"] == "2"
    assert structured("polytope", "--inequality", "bell")[1]["max_lhs"] == "1"
    assert run("polytope", "--n1", "20", "--n2", "5")[0] == 2


def test_extract_commands():
    code, rep = structured("extract", "two_lambda")
    assert code == 0 and rep["A1S"] == [0] and rep["P(A1S)"] == "1/2"
    code, rep = structured("extract", "all_up")
    assert rep["A1S"] == [0, 1]
    code, rep = structured("extract", "correlated_coin")
    assert code == 1 and rep["refused"]["condition"] == "passive_locality"
    assert "passive locality fails" in rep["refused"]["reason"]


def test_mode_flag_converts_model():
    _, rep = structured("--mode", "float", "check", "two_lambda")
    assert rep["mode"] == "float"


def test_reports_are_byte_identical():
    for argv in (("check", "cancellation"), ("polytope",), ("simulate", "--quantum", "--angle-pairs", "0,45;0,90", "--trials", "1000")):
        assert run(*argv) == run(*argv)


def test_timings_opt_in():
    _, rep = structured("--timings", "polytope")
    assert "timings" in rep
    assert "timings" not in structured("polytope")[1]


def test_bad_arguments_exit_2():
    assert run("nonsense")[0] == 2
    assert run("simulate", "--quantum")[0] == 2
    assert run("--seed", "-1", "polytope")[0] == 2


def test_module_entry_point():
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "bellcheck", "polytope"], capture_output=True, text=True)
    assert r.returncode == 0 and "max_lhs: 2" in r.stdout
