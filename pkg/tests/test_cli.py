import json
import subprocess
import sys

import pytest

from qtoroidal.cli import main

TINY = ["--max-fock-degree", "1", "--weight-radius", "0", "--exponent-bound", "1", "--u-bound", "0"]


def test_expand_prints_the_first_two_coefficients(capsys):
    assert main(["expand", "--field", "X0+", "--vector", "e(0,0)", "--range", "0..1"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["z^0: e(1,0)", "z^1: (v^-1) h[0,-1] e(1,0)"]


def test_expand_inverse_phi(capsys):
    main(["expand", "--field", "phi0+^-1", "--vector", "e(1,0)", "--range", "0..0"])
    assert capsys.readouterr().out.strip() == "z^0: (q^-2) e(1,0)"


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "nope"],
    ["verify", "--max-fock-degree", "-1"],
    ["verify", "--exponent-bound", "x"],
    ["expand", "--field", "Y0+", "--vector", "e(0,0)"],
    ["expand", "--field", "X0+", "--vector", "e(0,0)", "--range", "3..1"],
    ["verify", "--relations", "Q42", *TINY],
    [],
])
def test_bad_flags_exit_with_two(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_verify_writes_json(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["verify", "--suite", "relations", "--relations", "Q6,GKV", *TINY, "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert [d["item"] for d in data] == ["Q6", "GKV (negative control)"]
    assert data[1]["status"] == "fail"
    assert "expected to fail" in capsys.readouterr().out


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("suite = relations\nrelations = Q7\nmax-fock-degree = 1\nweight-radius = 0\n"
                   "exponent-bound = 1\nu-bound = 0\n")
    out = tmp_path / "r.json"
    assert main(["verify", "--config", str(cfg), "--exponent-bound", "2", "--out", str(out)]) == 0
    (rep,) = json.loads(out.read_text())
    assert rep["item"] == "Q7"
    assert rep["window"] == {"maxFockDegree": 1, "weightRadius": 0, "exponentBound": 2, "uBound": 0}


def test_config_rejects_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("colour = blue\n")
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--config", str(cfg)])
    assert exc.value.code == 2


def test_console_script_runs():
    res = subprocess.run([sys.executable, "-m", "qtoroidal.cli", "expand", "--field", "X1-",
                          "--vector", "e(0,0)", "--range", "0..0"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("z^0: ")
