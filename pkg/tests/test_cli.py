import json
import subprocess
import sys

import pytest

from nilonb.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_examples_lists_builtins(capsys):
    code, out, _ = run(capsys, "examples")
    assert code == 0
    names = [b["name"] for b in json.loads(out)["builtins"]]
    assert "dynin-folland" in names and "example-7dim-sqrt2" in names


def test_validate_exit_codes(capsys):
    assert run(capsys, "validate", "heisenberg:2")[0] == 0
    code, out, _ = run(capsys, "validate", "example-7dim-sqrt2")
    assert code == 1
    assert json.loads(out)["validation"]["witness"]["triple"] == ["X3", "X2", "X1"]


def test_analyze_report_fields(capsys):
    code, out, _ = run(capsys, "analyze", "dynin-folland", "--lambda", "2/5", "--mode", "uniform",
                       "--radius", "0")
    assert code == 0
    rep = json.loads(out)
    assert rep["formal_degree"]["exact"] == "8/125"
    assert rep["lattice"]["K"] == 8
    assert rep["lattice"]["integral_law"] is True
    assert rep["lattice"]["covolume_identity"] is True
    assert rep["representation"]["jacobian_one"] is True


def test_analyze_text_output(capsys, tmp_path):
    target = tmp_path / "r.txt"
    code, _, _ = run(capsys, "analyze", "heisenberg:1", "--text", "--out", str(target), "--radius", "0")
    assert code == 0
    assert "formal_degree" in target.read_text()


def test_basis_emits_members(capsys):
    code, out, _ = run(capsys, "basis", "heisenberg:1", "--radius", "1")
    assert code == 0
    fam = json.loads(out)["family"]
    assert fam["members"] == 9 and len(fam["member_list"]) == 9


def test_verify_passes_and_scale_hook_fails(capsys):
    code, out, _ = run(capsys, "verify", "heisenberg:1", "--radius", "2", "--tol", "1e-10")
    assert code == 0 and json.loads(out)["verified"] is True
    code, out, _ = run(capsys, "verify", "heisenberg:1", "--radius", "1", "--scale", "2")
    assert code == 1 and json.loads(out)["verified"] is False


def test_pipeline_errors_exit_3(capsys):
    code, _, err = run(capsys, "analyze", "example-7dim-sqrt2-corrected", "--mode", "uniform",
                       "--radius", "0")
    assert code == 3
    assert json.loads(err)["error"]["error"] == "IrrationalScaling"
    code, _, err = run(capsys, "analyze", "example-7dim-sqrt2", "--radius", "0")
    assert code == 3
    assert json.loads(err)["error"]["stage"] == "validate"


def test_input_errors_exit_2(capsys, tmp_path):
    assert run(capsys, "analyze", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"labels": ["A"], "brackets": [{"i": "A", "j": "B", "coeffs": {}}]}))
    assert run(capsys, "validate", str(bad))[0] == 2
    assert run(capsys, "analyze", "heisenberg:1", "--functional", "Q=1")[0] == 2


def test_functional_by_labels(capsys):
    code, out, _ = run(capsys, "analyze", "heisenberg:1", "--functional", "Z=3", "--radius", "0")
    assert code == 0 and json.loads(out)["formal_degree"]["exact"] == "3"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "nilonb", "examples", "--text"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert "heisenberg:d" in res.stdout


@pytest.mark.parametrize("argv", [["analyze"], ["nonsense"]])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_reports_are_deterministic(capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "verify", "dynin-folland", "--mode", "uniform", "--radius", "0")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
