import csv
import json

import pytest

from lieham.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--no-timestamp")
    return code, json.loads(out)


# -- catalog --------------------------------------------------------------------------

def test_list_hamiltonian_rows(capsys):
    code, out, _ = run(capsys, "catalog", "list", "--hamiltonian-only")
    assert code == 0 and len(out.split()) == 12


def test_list_primitive_hamiltonian_rows_as_json(capsys):
    code, doc = run_json(capsys, "catalog", "list", "--hamiltonian-only", "--primitive-only", "--json")
    assert code == 0 and doc["ids"] == ["P1", "P2", "P3", "P5"]


def test_show_p2(capsys):
    code, out, _ = run(capsys, "catalog", "show", "P2")
    assert code == 0 and "y != 0" in out and "1/y^2" in out


def test_show_affine_row_with_parameters(capsys):
    code, doc = run_json(capsys, "catalog", "show", "I16", "--param", "alpha=-1", "--param", "r=1", "--json")
    assert code == 0 and doc["entry"]["hamiltonian"]["extension"] is True


def test_verify_row(capsys):
    code, doc = run_json(capsys, "catalog", "verify", "P5")
    assert code == 0 and doc["passed"]


def test_unknown_row_is_a_usage_error(capsys):
    code, _, err = run(capsys, "catalog", "show", "Q7")
    assert code == 2 and "Q7" in err


# -- verify ---------------------------------------------------------------------------

def test_verify_sl2_fields(capsys):
    code, doc = run_json(capsys, "verify", "--fields", "1;0", "--fields", "x;y", "--fields", "x^2-y^2;2*x*y",
                         "--ansatz", "y")
    assert code == 0
    assert doc["verdict"] == "hamiltonian"


def test_verify_obstructed_fields(capsys):
    code, doc = run_json(capsys, "verify", "--fields", "1;0", "--fields", "0;1", "--fields", "x;y")
    assert code == 3 and doc["verdict"] == "obstruction"


def test_verify_single_translation(capsys):
    code, doc = run_json(capsys, "verify", "--fields", "1;0")
    assert code == 0


def test_verify_without_fields_is_a_usage_error(capsys):
    code, _, _ = run(capsys, "verify")
    assert code == 2


# -- simulate -------------------------------------------------------------------------

def test_simulate_autonomous_drift(capsys):
    code, doc = run_json(capsys, "simulate", "milne-pinney", "--param", "c=1", "--coeff", "w2=1", "--x0", "1,0.5",
                         "--t1", "10", "--rtol", "1e-10")
    assert code == 0 and doc["conservation"]["drift"] < 1e-8


def test_simulate_riccati_fixed_point(capsys, tmp_path):
    out = tmp_path / "r.csv"
    code, doc = run_json(capsys, "simulate", "riccati", "--coeff", "a0=1", "--coeff", "a1=0", "--coeff", "a2=1",
                         "--x0", "0,1", "--out", str(out))
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert rows and all(abs(float(r["x"])) < 1e-12 and abs(float(r["y"]) - 1) < 1e-12 for r in rows)


def test_simulate_zero_system_is_constant(capsys, tmp_path):
    out = tmp_path / "z.json"
    code, _ = run_json(capsys, "simulate", "riccati", "--coeff", "a0=0", "--coeff", "a1=0", "--coeff", "a2=0",
                       "--x0", "0.3,0.7", "--out", str(out), "--format", "json")
    data = json.loads(out.read_text())
    assert code == 0 and set(data["x"]) == {0.3} and set(data["y"]) == {0.7}


def test_simulate_abort_exit_code(capsys):
    code, doc = run_json(capsys, "simulate", "kummer-schwarz", "--param", "c=-1", "--coeff", "b1=sin(t)",
                         "--x0", "1,0.3", "--t1", "2")
    assert code == 5 and doc["termination"] != "reached t1"


def test_unknown_system_is_a_usage_error(capsys):
    code, _, _ = run(capsys, "simulate", "duffing")
    assert code == 2


# -- transport ------------------------------------------------------------------------

def test_transport_default_run(capsys):
    code, doc = run_json(capsys, "transport", "--from", "kummer-schwarz", "--to", "milne-pinney")
    assert code == 0 and doc["max_deviation"] < 1e-5


def test_identity_self_transport(capsys):
    code, doc = run_json(capsys, "transport", "--from", "milne-pinney", "--to", "milne-pinney",
                         "--coeff", "w2=sin(t)", "--t1", "2")
    assert code == 0 and doc["max_deviation"] < 1e-10


def test_riccati_to_mp_transport(capsys):
    code, doc = run_json(capsys, "transport", "--from", "riccati", "--to", "milne-pinney", "--param", "c=1",
                         "--param", "lambda=1", "--coeff", "a1=sin(t)", "--coeff", "a2=cos(t)", "--t1", "2")
    assert code == 0 and doc["max_deviation"] < 1e-5


def test_transport_needs_both_ends(capsys):
    code, _, _ = run(capsys, "transport", "--from", "riccati")
    assert code == 2


# -- configuration and reproducibility --------------------------------------------------

def test_config_file_and_flag_precedence(capsys, tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("# MP run\nparam = c=1\ncoeff = w2=1\nx0 = 1,0.5\nt1 = 3\nrtol = 1e-10\n", encoding="utf-8")
    code, doc = run_json(capsys, "simulate", "milne-pinney", "--config", str(conf), "--t1", "2")
    assert code == 0
    assert doc["config"]["t1"] == 2.0 and doc["t_end"] == pytest.approx(2.0)
    assert doc["config"]["x0"] == [1.0, 0.5]


def test_bad_config_key(capsys, tmp_path):
    conf = tmp_path / "bad.conf"
    conf.write_text("colour = blue\n", encoding="utf-8")
    code, _, err = run(capsys, "simulate", "riccati", "--config", str(conf))
    assert code == 2 and "colour" in err


def test_reports_are_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        main(["verify", "--fields", "1;0", "--fields", "x;y", "--no-timestamp", "--seed", "5", "--report", str(path)])
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_report_carries_anchors_and_timestamp(capsys):
    code, out, _ = run(capsys, "catalog", "show", "P2", "--json")
    doc = json.loads(out)
    assert doc["anchors"] and "timestamp" in doc


def test_precision_out_of_range(capsys, tmp_path):
    code, _, _ = run(capsys, "simulate", "riccati", "--precision", "40", "--out", str(tmp_path / "p.csv"))
    assert code == 2
