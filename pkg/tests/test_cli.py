import json
import subprocess
import sys

import pytest

from zcap.acceptance import CRITERIA, run, run_all
from zcap.cli import main
from zcap.config import Config


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cheb_example(capsys):
    code, out, _ = _run(capsys, "cheb", "--set", "[-1,1]", "--degree", "3")
    assert code == 0
    rep = json.loads(out)
    assert rep["command"] == "cheb"
    assert rep["result"]["coefficients"] == pytest.approx([0, -0.75, 0, 1], abs=1e-12)
    assert rep["result"]["norm"] == pytest.approx(0.25)
    assert "wall_time" not in rep


def test_kernel_example(capsys):
    code, out, _ = _run(capsys, "kernel", "--set", "[-1,1]")
    assert code == 0
    assert json.loads(out)["result"]["points"] == pytest.approx([-1, 0, 1], abs=1e-9)


def test_capacity_at_least_one_exit_2(capsys):
    code, out, err = _run(capsys, "approx", "--set", "[-2,2]", "--target", "poly:1/2", "--epsilon", "0.1")
    assert code == 2
    assert json.loads(out)["error"]["type"] == "CapacityAtLeastOne"
    assert "CapacityAtLeastOne" in err


def test_not_interpolable_exit_2(capsys):
    code, out, _ = _run(capsys, "approx", "--set", "[-1,1]", "--target", "poly:1/2", "--epsilon", "0.2")
    assert code == 2
    assert json.loads(out)["error"]["type"] == "NotInterpolable"


@pytest.mark.parametrize("argv", [
    [],
    ["nosuch"],
    ["cheb", "--set", "[-1,1]"],
    ["cheb", "--set", "[-1,1]", "--degree", "x"],
    ["cheb", "--set", "[1,0]", "--degree", "2"],
    ["cheb", "--set", "[-1,1]", "--degree", "2", "--precision", "3"],
])
def test_usage_errors_exit_1(capsys, argv):
    code, _, err = _run(capsys, *argv)
    assert code == 1
    assert err


def test_approx_big_integers_as_strings(capsys):
    code, out, _ = _run(capsys, "approx", "--set", "[1/4,1/2]", "--target", "poly:1/2", "--epsilon", "0.05")
    assert code == 0
    res = json.loads(out)["result"]
    assert res["achieved_error"] <= 0.05
    assert all(isinstance(c, (int, str)) for c in res["coefficients"])
    assert all(int(c) == int(str(c)) for c in res["coefficients"])


def test_approx_csv_target(capsys, tmp_path):
    f = tmp_path / "s.csv"
    f.write_text("x,y\n0.25,0.5\n0.4,0.6\n0.5,0.45\n")
    code, out, _ = _run(capsys, "approx", "--set", "[1/4,1/2]", "--target", str(f), "--epsilon", "0.2")
    assert code == 0
    assert json.loads(out)["result"]["achieved_error"] < 0.2


def test_byte_identical(capsys):
    argv = ["capacity", "--set", "[0,1] U [2,3]", "--n-max", "6", "--fekete-n", "5", "--seed", "3"]
    _, a, _ = _run(capsys, *argv)
    _, b, _ = _run(capsys, *argv)
    assert a == b


def test_byte_identical_across_processes():
    argv = [sys.executable, "-m", "zcap.cli", "smallnorm", "--set", "[-1/2,1/2]", "--trace"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b


@pytest.mark.parametrize("digits", [6, 10, 17])
def test_precision_round_trip(capsys, digits):
    code, out, _ = _run(capsys, "cheb", "--set", "[0,1] U [2,3]", "--degree", "3", "--precision", str(digits))
    assert code == 0
    res = json.loads(out)["result"]
    for v in res["coefficients"] + [res["norm"]] + res["alternation_points"]:
        assert float(f"{v:.{digits}g}") == v


def test_timing_flag(capsys):
    _, out, _ = _run(capsys, "cheb", "--set", "[0,1]", "--degree", "2", "--timing")
    assert json.loads(out)["wall_time"] >= 0


def test_config_file_and_out_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("precision = 8\nmultistarts = 2\n")
    dest = tmp_path / "out.json"
    code, out, _ = _run(capsys, "capacity", "--set", "[0,1]", "--n-max", "4", "--config", str(cfg), "--out", str(dest))
    assert code == 0 and out == ""
    rep = json.loads(dest.read_text())
    assert rep["config"]["precision"] == 8 and rep["config"]["multistarts"] == 2


def test_bad_config_file_exit_1(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("max_iters = 0\n")
    code, _, _ = _run(capsys, "cheb", "--set", "[0,1]", "--degree", "2", "--config", str(cfg))
    assert code == 1


def test_csv_output(capsys):
    code, out, _ = _run(capsys, "capacity", "--set", "[0,1]", "--n-max", "4", "--out", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,d1,d2,alpha_n"
    assert len(lines) == 5
    code, out, _ = _run(capsys, "cheb", "--set", "[0,1]", "--degree", "2", "--format", "csv")
    assert out.splitlines()[0] == "key,value"


def test_smallnorm_oracle(capsys):
    code, out, _ = _run(capsys, "smallnorm", "--set", "[-2,2]", "--oracle", "--max-deg", "4", "--coeff-bound", "2")
    assert code == 0 and json.loads(out)["result"]["found"] is False
    code, out, _ = _run(capsys, "smallnorm", "--set", "[-2,2]")
    assert code == 2


def test_threads_env(monkeypatch):
    monkeypatch.setenv("ZCAP_THREADS", "3")
    assert Config().threads == 3


def test_selftest_filter(capsys):
    code, out, err = _run(capsys, "selftest", "--filter", "discreteness")
    assert code == 0
    crit = json.loads(out)["result"]["criteria"]
    assert [c["id"] for c in crit] == [4]
    assert "[PASS] 4." in err


def test_filter_selects_by_name_and_id():
    assert [c.id for c in CRITERIA if "capacity" in c.name] == [3]
    assert run_all("no such criterion") == []


def test_tampered_tolerance_reports_id():
    # a one-step exchange budget cannot certify the gap
    r = run(CRITERIA[1], Config(max_iters=1))
    assert not r.passed and r.id == 2
    assert r.line().startswith("[FAIL] 2.")
