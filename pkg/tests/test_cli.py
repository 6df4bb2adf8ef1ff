import csv
import io
import json
import subprocess
import sys

import pytest

from walker3.cli import dump_json, main
from walker3.config import RunConfig, load_config, parse_config_text


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_dump_json_prints_17_digits():
    text = dump_json({"a": 0.1, "b": [1, 2.5e-300, float("inf")], "c": True, "d": None})
    assert text == '{"a": 0.10000000000000001, "b": [1, 2.5e-300, Infinity], "c": true, "d": null}\n'


def test_curvature_command(capsys):
    code, out, err = run(capsys, "curvature", "--expr", "(1-x)^-2 * y^2", "--point", "0,1", "--order", "0")
    assert code == 0
    comps = json.loads(out)["tensors"][0]["components"]
    assert {"indices": ["x", "y", "y", "x"], "value": 2} in comps
    assert "curvature:" in err


def test_curvature_exp_y_and_parameters(capsys):
    _, out, _ = run(capsys, "curvature", "--expr", "exp(y)", "--point", "0,0.5", "--order", "1")
    t1 = json.loads(out)["tensors"][1]["components"]
    slot = next(c for c in t1 if c["indices"] == ["x", "y", "y", "x", ";", "y"])
    assert slot["value"] == pytest.approx(1.6487212707001282, rel=1e-15)
    _, out, _ = run(capsys, "curvature", "--expr", "eps*y^2", "--param", "eps=2", "--order", "1")
    assert json.loads(out)["tensors"][1]["components"] == []


def test_output_is_byte_identical(capsys):
    args = ("classify", "--expr", "exp(y)")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_classify_command(capsys):
    code, out, _ = run(capsys, "classify", "--expr", "exp(y)")
    data = json.loads(out)
    assert code == 0 and data["tag"] == "Homogeneous_N" and data["parameters"]["b"] == 1


def test_model_match_command(capsys):
    _, out, _ = run(capsys, "model-match", "--expr", "exp(y)", "--point", "0.3,0.2")
    assert json.loads(out)["model"] == "N2"
    _, out, _ = run(capsys, "model-match", "--expr", "(y+2)^3", "--frame", "kv")
    assert json.loads(out)["weighted_slots"] == pytest.approx([1, 0, 1], abs=1e-12)


def test_geodesic_command_with_oracle(capsys, tmp_path):
    target = tmp_path / "traj.csv"
    code, _, err = run(
        capsys, "geodesic", "--expr", "exp(y)", "--init", "0,-1,0,1,-0.5,0", "--nb-check", "1", "--format", "csv", "--out", str(target)
    )
    assert code == 0 and "closed-form rel err" in err
    rows = list(csv.reader(io.StringIO(target.read_text())))
    assert rows[0] == ["t", "x", "y", "xt", "xp", "yp", "xtp", "energy"]
    _, out, _ = run(capsys, "geodesic", "--expr", "exp(y)", "--init", "0,-1,0,1,-0.5,0", "--nb-check", "1")
    assert json.loads(out)["nb_closed_form"]["max_rel_err_y"] < 1e-6


def test_soliton_commands(capsys):
    _, out, err = run(capsys, "soliton", "--build", "R1", "--kappa", "1")
    data = json.loads(out)
    assert data["certificate"]["residual"] < 1e-8 and data["certificate"]["label"] == "steady"
    _, out, _ = run(capsys, "soliton", "--build", "C1", "--kappa", "2", "--beta", "sin(x)", "--cotton-sign", "-1")
    data = json.loads(out)
    assert data["certificates"]["-1"]["residual"] < 1e-8
    assert data["report"]["printed_agrees"] is False
    _, out, _ = run(capsys, "soliton", "--remark", "0.5")
    assert json.loads(out)["corrected"]["+1"] < 1e-10


def test_blowup_command_json(capsys):
    code, out, _ = run(capsys, "blowup-pc", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["one_minus_t_star"] < 1e-3 and data["max_rel_curvature_dev"] < 1e-4


@pytest.mark.parametrize(
    "argv,code",
    [
        (("curvature", "--expr", "(x"), 2),
        (("curvature",), 2),
        (("curvature", "--expr", "x", "--point", "1"), 2),
        (("curvature", "--expr", "ln(x)", "--point=-1,0"), 3),
        (("model-match", "--expr", "y^2", "--frame", "1", "--point", "0,1"), 4),
        (("classify", "--expr", "x", "--grid", "1,2"), 2),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# test\ncotton_sign = -1\ngrid = 3,3,0.1,0.9,-0.5,0.5\n")
    assert load_config(cfg) == RunConfig(cotton_sign=-1, grid=RunConfig().grid.parse("3,3,0.1,0.9,-0.5,0.5"))
    _, out, _ = run(capsys, "soliton", "--build", "C3", "--config", str(cfg))
    assert json.loads(out)["cotton_sign"] == -1
    _, out, _ = run(capsys, "soliton", "--build", "C3", "--config", str(cfg), "--cotton-sign", "1")
    assert json.loads(out)["cotton_sign"] == 1


def test_config_validation():
    with pytest.raises(ValueError):
        parse_config_text("colour = blue")
    with pytest.raises(ValueError):
        RunConfig(cotton_sign=2)
    assert RunConfig().updated(ode_tol=None).ode_tol == 1e-10


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "walker3.cli", "curvature", "--expr", "y^2", "--order", "0"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["order"] == 0
