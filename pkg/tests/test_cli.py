import json

import pytest

from k3linsys.cli import CSV_COLUMNS, main, sweep_systems
from k3linsys.degeneration import verify_certificate
from k3linsys.oracle.interpolation import verify_report


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--format", "json", *argv)
    assert code == 0, err
    return json.loads(out)


def test_vdim(capsys):
    doc = run_json(capsys, "vdim", "--n", "4", "--d", "2", "--mults", "4")
    assert (doc["result"]["v"], doc["result"]["e"]) == (-1, -1)
    assert doc["tool"] == "k3linsys" and doc["command"] == "vdim"


def test_shorthand(capsys):
    doc = run_json(capsys, "vdim", "--n", "4", "--d", "5", "--mults", "2^4")
    assert doc["result"]["system"]["mults"] == [2, 2, 2, 2]
    assert doc["result"]["v"] == 39


def test_classify(capsys):
    doc = run_json(capsys, "classify", "--n", "2", "--d", "3", "--mults", "3,3")
    result = doc["result"]
    assert result["case_tag"] == "special-i" and result["predicted_dim"] == 0
    assert "L^2(d,d^2)" in result["notes"]


def test_audit(capsys):
    doc = run_json(capsys, "audit", "--n", "4", "--part", "1:2,0,0", "--part", "1:1,1,1")
    assert doc["result"]["violations"] == [[0, 1]]
    doc = run_json(capsys, "audit", "--n", "2", "--part", "1:1,1", "--part", "1:1,0")
    assert doc["result"]["clean"] and doc["result"]["allowed_unit_pairs"] == [[0, 1]]


def test_certify_check_leaves(capsys, tmp_path):
    doc = run_json(capsys, "certify", "--n", "4", "--d", "3", "--m", "1", "--h", "1", "--k", "0",
                   "--check-leaves")
    cert = doc["result"]
    assert cert["depth"] == 1
    assert cert["verdict"] == "leaf-verified-nonspecial"
    assert cert["tree"]["child"]["system"] == {"n": 4, "d": 3, "mults": [1]}
    assert verify_certificate(cert) == []
    path = tmp_path / "cert.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0 and "True" in out
    cert["tree"]["audit"]["gluing_budget"] += 1
    path.write_text(json.dumps(doc))
    code, _, _ = run(capsys, "verify", str(path))
    assert code == 2


def test_certify_unsupported_model(capsys):
    doc = run_json(capsys, "certify", "--n", "6", "--d", "2", "--m", "1", "--h", "1", "--check-leaves")
    assert doc["result"]["verdict"] == "conditional-nonspecial"
    assert any("n=6" in note for note in doc["result"]["notes"])


def test_oracle_and_mult(capsys):
    doc = run_json(capsys, "oracle", "--n", "4", "--d", "2", "--mults", "1,1,1")
    assert doc["result"]["actual_dim"] == 6 and doc["result"]["certified_nonspecial"]
    assert verify_report(doc["result"]) == []
    doc = run_json(capsys, "mult", "--n", "4", "--d", "2", "--mults", "1,1")
    assert doc["result"]["measured"] == 1


def test_env_defaults_and_flags(capsys, monkeypatch):
    monkeypatch.setenv("K3LS_SEED", "7")
    monkeypatch.setenv("K3LS_PRIME", "2000003")
    doc = run_json(capsys, "oracle", "--n", "2", "--d", "1", "--mults", "1")
    assert doc["result"]["seed"] == 7 and doc["result"]["prime"] == 2000003
    doc = run_json(capsys, "oracle", "--n", "2", "--d", "1", "--mults", "1", "--seed", "3")
    assert doc["result"]["seed"] == 3


def test_byte_identical(capsys):
    args = ("oracle", "--n", "4", "--d", "3", "--mults", "2,2,1", "--seed", "4")
    assert run(capsys, "--format", "json", *args)[1] == run(capsys, "--format", "json", *args)[1]


def test_csv_sweep(capsys):
    code, out, _ = run(capsys, "--format", "csv", "sweep", "--n", "2", "--d-range", "1-2",
                       "--max-r", "2", "--max-mult", "2")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    for line in lines[1:]:
        assert line.endswith("true")


def test_sweep_systems_filter():
    systems = sweep_systems([4], range(2, 3), 1, 6, 5, include_special=False)
    assert all(s.mults != (4,) for s in systems)
    assert any(s.mults == (4,) for s in sweep_systems([4], range(2, 3), 1, 6, 5))


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "--format", "json", "--output", str(target), "vdim", "--n", "2", "--d", "1")
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["result"]["v"] == 2


@pytest.mark.parametrize("argv", [
    ("vdim", "--n", "3", "--d", "1"),
    ("vdim", "--n", "4"),
    ("vdim", "--n", "4", "--d", "1", "--mults", "x"),
    ("oracle", "--n", "6", "--d", "1", "--mults", "1"),
    ("--format", "csv", "audit", "--n", "2"),
    ("certify", "--n", "4", "--d", "1", "--m", "1", "--twist", "-1", "--h", "1"),
])
def test_usage_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err


def test_computation_error_exit_2(capsys, tmp_path):
    model = tmp_path / "singular.txt"
    model.write_text("variant = quartic\nprime = 1000003\n0 0 0 4 1\n")
    code, _, err = run(capsys, "oracle", "--n", "4", "--d", "1", "--mults", "1", "--model-file", str(model))
    assert code == 2
    assert "models" in err
