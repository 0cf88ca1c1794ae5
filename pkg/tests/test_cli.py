import csv
import io
import json

import numpy as np
import pytest

from periodic_ssq import cli, curve


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_parse_range():
    assert cli.parse_range("400") == [400]
    assert cli.parse_range("50:50:200") == [50, 100, 150, 200]
    for bad in ("a", "1:0:5", "1:2"):
        with pytest.raises(cli.ConfigError):
            cli.parse_range(bad)


def test_parse_complex():
    assert cli.parse_complex("1+0.05i") == 1 + 0.05j
    assert cli.parse_complex("1-0.05j") == 1 - 0.05j
    with pytest.raises(cli.ConfigError):
        cli.parse_complex("one")


def test_config_validation():
    with pytest.raises(cli.ConfigError):
        cli.RunConfig(n=[2]).validate()
    with pytest.raises(cli.ConfigError):
        cli.RunConfig(kernel="power7").validate()
    with pytest.raises(cli.ConfigError):
        cli.RunConfig(d_list=[0.0]).validate()


def test_eval_circle(capsys):
    code, out, _ = run(capsys, "eval", "--geometry", "circle", "--n", "200", "--z", "0.5")
    assert code == 0
    rec = json.loads(out)
    assert rec["value"]["re"] == pytest.approx(0, abs=1e-12)
    assert rec["value"]["im"] == pytest.approx(2 * np.pi, abs=1e-12)
    assert rec["method"] == "trapezoidal"
    assert set(rec) >= {"value", "method", "im_tstar", "iterations", "residual"}


def test_eval_far_outside(capsys):
    code, out, _ = run(capsys, "eval", "--z", "40+40i")
    assert code == 0
    assert json.loads(out)["method"] == "trapezoidal"


def test_eval_near_uses_ssq(capsys):
    code, out, _ = run(capsys, "eval", "--geometry", "circle", "--n", "200",
                       "--z", "0.99", "--kernel", "log")
    rec = json.loads(out)
    assert code == 0 and rec["method"] == "ssq" and rec["preimage_converged"]
    assert rec["value"] == pytest.approx(0, abs=1e-11)


def test_eval_on_curve_exit_code(capsys):
    code, _, err = run(capsys, "eval", "--geometry", "circle", "--n", "4", "--z", "1")
    assert code == 2 and "error" in err


def test_eval_log_complex_density_rejected(capsys):
    code, _, _ = run(capsys, "eval", "--kernel", "log", "--density", "cubic", "--z", "0.1")
    assert code == 2


def test_invalid_config_exit_codes(capsys):
    assert run(capsys, "converge", "--n", "2")[0] == 2
    assert run(capsys, "converge", "--d", "0")[0] == 2
    assert run(capsys, "decay", "--t-star", "abc")[0] == 2
    assert run(capsys, "eval", "--z", "0.1", "--tol", "2")[0] == 2
    assert run(capsys, "eval", "--geometry", "starfish", "--amplitude", "1.5", "--z", "0.1")[0] == 2


def test_unwritable_output(capsys, tmp_path):
    code, _, err = run(capsys, "decay", "--t-star", "1+0.05i", "--out",
                       str(tmp_path / "missing" / "x.csv"))
    assert code == 2 and "missing" in err


def test_numerical_failure_exit_code(capsys, monkeypatch):
    from periodic_ssq import bie, exceptions

    def boom(problem):
        raise exceptions.SolverError("singular system", condition=np.inf)

    monkeypatch.setattr(bie, "solve_dirichlet", boom)
    code, _, err = run(capsys, "demo-laplace", "--n", "50", "--grid", "10")
    assert code == 3 and "singular" in err


def test_converge_schema_and_row_count(capsys):
    code, out, _ = run(capsys, "converge", "--kernel", "cauchy", "--side", "both",
                       "--n", "50:50:150", "--d", "0.02,0.04")
    assert code == 0
    r = rows(out)
    assert r[0] == ["kernel", "side", "d", "N", "err_trapz", "err_ssq", "flags"]
    assert len(r) - 1 == 2 * 2 * 3
    assert [x[3] for x in r[1:4]] == ["50", "100", "150"]


def test_converge_interior_d002_at_400(capsys):
    code, out, _ = run(capsys, "converge", "--side", "interior", "--n", "400", "--d", "0.02")
    r = rows(out)[1]
    assert float(r[5]) <= 1e-10


def test_converge_json(capsys):
    code, out, _ = run(capsys, "converge", "--side", "interior", "--n", "100",
                       "--d", "0.04", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data) == 1 and data[0]["N"] == 100


def test_decay_schema(capsys):
    code, out, _ = run(capsys, "decay", "--t-star", "1+0.05i")
    r = rows(out)
    assert code == 0 and r[0] == ["k", "abs_chat", "abs_fhat"]
    assert len(r) - 1 == 401


def test_decay_circle_single_mode(capsys):
    code, out, _ = run(capsys, "decay", "--geometry", "circle", "--density", "one",
                       "--t-star", "1+0.05i", "--n", "65")
    fhat = np.array([float(x[2]) for x in rows(out)[1:]])
    assert np.sum(fhat > 1e-13) == 1


def test_demo_laplace_small_grid(capsys, tmp_path):
    path = tmp_path / "demo.csv"
    code, _, err = run(capsys, "demo-laplace", "--grid", "50", "--n", "100", "--out", str(path))
    assert code == 0 and "max error" in err
    r = rows(path.read_text())
    assert r[0] == ["x", "y", "u", "u_exact", "abs_error", "method"]
    disc = curve.make_starfish(n=100)
    g = disc.gamma
    x = np.linspace(g.real.min(), g.real.max(), 50)
    y = np.linspace(g.imag.min(), g.imag.max(), 50)
    X, Y = np.meshgrid(x, y)
    Z = (X + 1j * Y).ravel()
    fine = curve.make_starfish(n=4000)
    assert len(r) - 1 == curve.is_interior(fine, Z).sum()
    assert {row[5] for row in r[1:]} <= {"ssq", "trapezoidal"}


def test_determinism(capsys, tmp_path):
    args = ["converge", "--kernel", "log", "--side", "exterior", "--n", "60:60:120",
            "--d", "0.04", "--seed", "3"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, *args, "--out", str(a))[0] == 0
    assert run(capsys, *args, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    _, o1, _ = run(capsys, "eval", "--z", "0.9+0.1i", "--kernel", "power2")
    _, o2, _ = run(capsys, "eval", "--z", "0.9+0.1i", "--kernel", "power2")
    assert o1 == o2


def test_module_entry_point():
    import subprocess
    import sys
    proc = subprocess.run([sys.executable, "-m", "periodic_ssq", "eval", "--geometry",
                           "circle", "--z", "0.5", "--n", "64"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"]["im"] == pytest.approx(2 * np.pi)
