import io
import json
import subprocess
import sys

import pytest

from gkcalc.cli import run_cli
from helpers import FIXTURES

P1 = str(FIXTURES / "P1.gk")
P2 = str(FIXTURES / "P2.gk")
M1 = str(FIXTURES / "M1.json")
M2 = str(FIXTURES / "M2.json")


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_validate():
    code, out, _ = run("validate", P1)
    assert code == 0
    code, out, _ = run("validate", str(FIXTURES / "broken.gk"))
    assert code == 1 and "associativity" in out


def test_malformed_presentation(tmp_path):
    bad = tmp_path / "bad.gk"
    bad.write_text("object A\nhom f A -> A\n")
    code, _, err = run("validate", str(bad))
    assert code == 2 and "line 2" in err
    assert run("validate", str(tmp_path / "missing.gk"))[0] == 2


def test_equiv_and_trace(tmp_path):
    trace = tmp_path / "t.json"
    code, out, _ = run("equiv", P1, "-l", "pA;f;theta(S1) + pB;s;theta(S1)", "-r", "id(AB)", "--trace", str(trace))
    assert code == 0 and out.startswith("Equivalent (")
    assert json.loads(trace.read_text())
    code, out, _ = run("check-trace", P1, "--trace", str(trace), "--model", M1)
    assert code == 0
    assert out.splitlines()[1] == "model check ok"


def test_equiv_unknown_and_type_error():
    code, out, _ = run("equiv", P1, "-l", "g_s", "-r", "id(D)", "--depth", "1")
    assert code == 1 and out.startswith("Unknown: ")
    code, _, err = run("equiv", P1, "-l", "f", "-r", "g")
    assert code == 2 and "error" in err
    assert run("equiv", P1, "-l", "f", "-r", "f", "--depth", "-1")[0] == 2


def test_tampered_trace_is_rejected(tmp_path):
    trace = tmp_path / "t.json"
    assert run("normalize", P1, "-e", "pB;s;g - pB;iB;pB", "--trace", str(trace))[0] == 0
    data = json.loads(trace.read_text())
    data["end"] = "pB"
    trace.write_text(json.dumps(data))
    code, out, _ = run("check-trace", P1, "--trace", str(trace))
    assert code == 1 and out.startswith("trace rejected")
    trace.write_text("{")
    assert run("check-trace", P1, "--trace", str(trace))[0] == 2


def test_normalize():
    code, out, _ = run("normalize", P1, "-e", "pB;s;g")
    assert (code, out) == (0, "pB\n")
    code, out, _ = run("normalize", P1, "-e", "0", "--dom", "A", "--cod", "B")
    assert (code, out) == (0, "0(A,B)\n")
    assert run("normalize", P1, "-e", "f;;g")[0] == 2


@pytest.mark.parametrize(
    "pres, model, expr, want",
    [
        (P1, M1, "theta(S1)", "[[1, 0],\n [0, 1]]\n"),
        (P1, M1, "0(A,B)", "[[0]]\n"),
        (P2, M2, "inv(c)", "[[0, 1],\n [1, 0]]\n"),
    ],
)
def test_eval(pres, model, expr, want):
    assert run("eval", pres, "--model", model, "-e", expr) == (0, want, "")


def test_eval_bad_model(tmp_path):
    bad = tmp_path / "m.json"
    bad.write_text(json.dumps({"dims": {"A": 1}}))
    assert run("eval", P1, "--model", str(bad), "-e", "f")[0] == 2


def test_usage_errors():
    assert run()[0] == 2
    assert run("frobnicate")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gkcalc", "normalize", P1, "-e", "id(A);f"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout == "f\n"
