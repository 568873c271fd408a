import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from kslope.cli import run
from kslope.corpus import pp2
from kslope.slope import f_alpha_at


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def pp2_file(tmp_path):
    code, text, _ = call("corpus", "pp2")
    assert code == 0
    path = tmp_path / "pp2.json"
    path.write_text(text, encoding="utf-8")
    return str(path)


@pytest.fixture
def cxc_file(tmp_path):
    code, text, _ = call("corpus", "product-of-curves", "g=2")
    assert code == 0
    path = tmp_path / "cxc.json"
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_check(pp2_file):
    code, text, _ = call("check", "--setup", pp2_file, "--divisor", "line", "--lambda-max", "1")
    assert code == 0
    cert = json.loads(text)
    assert cert["command"] == "check"
    assert cert["result"]["status"] == "SemistableBoundary"
    assert cert["result"]["zeros"] == [["0", "0"], ["1", "1"]]
    assert cert["setup_digest"].startswith("sha256:")


def test_destabilize(cxc_file, pp2_file):
    code, text, _ = call("destabilize", "--setup", cxc_file, "--divisor", "delta")
    assert code == 0
    result = json.loads(text)["result"]
    assert result["status"] == "Witness"
    assert Fraction(result["s"]) <= Fraction(1, 32)
    code, _, err = call("destabilize", "--setup", pp2_file, "--divisor", "line")
    assert code == 2 and "CriterionNotSatisfied" in err


def test_destabilize_inconclusive(cxc_file):
    code, text, _ = call("destabilize", "--setup", cxc_file, "--divisor", "delta", "--max-k", "3")
    assert code == 3
    assert json.loads(text)["result"]["status"] == "NotFound"


def test_seshadri(pp2_file):
    code, text, _ = call("seshadri", "--setup", pp2_file, "--divisor", "line")
    assert code == 0
    assert json.loads(text)["result"] == {"lo": "1", "hi": "1", "binding_constraint": "H"}


def test_sample_rows_come_from_engine(pp2_file):
    code, text, _ = call("sample", "--setup", pp2_file, "--divisor", "line", "--from", "0", "--to", "1", "--steps", "8")
    assert code == 0
    assert "\r" not in text
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 9
    s = pp2()
    for row in rows:
        lam = Fraction(row["lambda"])
        assert Fraction(row["F"]) == f_alpha_at(s, s.divisor("line"), lam) == lam * (1 - lam) ** 2 / 2
    assert rows[0]["mu"] == "" and rows[-1]["mu"] == "3"
    assert rows[1]["lambda_decimal"] == "0.125"
    assert rows[1]["F_decimal"] == "0.0478515625"


def test_bundle_and_adiabatic(cxc_file):
    code, text, _ = call("bundle", "--degrees", "-1,0")
    assert code == 0 and json.loads(text)["result"]["status"] == "Unstable"
    code, text, _ = call("bundle", "--sub", "3,1,4,2")
    assert code == 0 and json.loads(text)["result"]["status"] == "Unstable"
    code, text, _ = call(
        "adiabatic", "--setup", cxc_file, "--divisor", "delta",
        "--fibre-genus", "2", "--fibre-degree", "1", "--kappa", "f1", "--ell", "0,0,0",
    )
    assert code == 0
    result = json.loads(text)["result"]
    assert result["twist"] == ["1", "0", "0"] and result["outcome"]["status"] == "Witness"


def test_slope_poly_and_audit(pp2_file):
    code, text, _ = call("slope-poly", "--setup", pp2_file, "--divisor", "line")
    assert code == 0
    assert json.loads(text)["result"]["f_alpha"] == ["0", "1/2", "-1", "1/2"]
    code, text, _ = call("audit", "--setup", pp2_file, "--divisor", "line")
    assert code == 0
    assert json.loads(text)["result"]["den_residual"] == []


def test_determinism(cxc_file):
    argv = ("destabilize", "--setup", cxc_file, "--divisor", "delta")
    assert call(*argv)[1] == call(*argv)[1]


def test_errors(pp2_file, tmp_path):
    code, text, _ = call("--json-errors", "check", "--setup", pp2_file, "--divisor", "cubic", "--lambda-max", "1")
    assert code == 2
    assert json.loads(text)["error"] == "SetupError"
    code, _, err = call("check", "--setup", pp2_file, "--divisor", "line", "--lambda-max", "0.5e")
    assert code == 2 and "MalformedRational" in err
    code, _, _ = call("check", "--setup", str(tmp_path / "missing.json"), "--divisor", "line", "--lambda-max", "1")
    assert code == 2
    code, _, _ = call("frobnicate")
    assert code == 2
    code, _, _ = call("corpus", "product-of-curves", "g=1")
    assert code == 2


def test_console_entry_point(pp2_file):
    proc = subprocess.run(
        [sys.executable, "-m", "kslope.cli", "check", "--setup", pp2_file, "--divisor", "line", "--lambda-max", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["status"] == "SemistableBoundary"
