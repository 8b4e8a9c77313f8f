import io
import json
import random
from pathlib import Path

import pytest

from helpers import random_word
from nilpeq.cli import run

DATA = Path(__file__).resolve().parent.parent / "data"
GROUP = str(DATA / "heisenberg.grp")


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def decide_json(eq, *extra):
    code, out, _ = call("decide", "--group", GROUP, "--eq", eq, "--format", "json", *extra)
    return code, json.loads(out)


def test_decide_sat():
    code, report = decide_json("[a1,x]=c")
    assert code == 0 and report["verdict"] == "sat"
    assert report["witness"]["x"]["word"] == "a2"


def test_decide_unsat_with_parity_certificate():
    code, report = decide_json("x^2=a1")
    assert code == 1 and report["verdict"] == "unsat"
    leaf = report["certificate"]["parts"][0]["parts"][0]
    assert leaf["kind"] == "gcd-failure"


def test_decide_unknown_on_tiny_budget():
    code, out, _ = call("decide", "--group", str(DATA / "torsion.grp"), "--eq", "x*y*z = c",
                        "--branch-budget", "2", "--format", "json")
    report = json.loads(out)
    assert code == 2 and report["verdict"] == "unknown" and "budget" in report["reason"]


def test_text_report():
    code, out, _ = call("decide", "--group", "heisenberg", "--eq", "[a1,x]=c")
    assert code == 0 and "verdict:  sat" in out and "x = a2" in out


def test_eq_file(tmp_path):
    f = tmp_path / "eq.txt"
    f.write_text("[x,y] = c\n")
    code, report = decide_json_file(f)
    assert code == 0 and set(report["witness"]) == {"x", "y"}


def decide_json_file(path):
    code, out, _ = call("decide", "--group", GROUP, "--eq-file", str(path), "--format", "json")
    return code, json.loads(out)


def test_environment_override(monkeypatch):
    monkeypatch.setenv("NEQ_BRANCH_BUDGET", "2")
    assert call("decide", "--group", str(DATA / "torsion.grp"), "--eq", "x*y = c")[0] == 2
    monkeypatch.setenv("NEQ_BRANCH_BUDGET", "zero")
    assert call("decide", "--group", GROUP, "--eq", "x = a1")[0] == 64


@pytest.mark.parametrize("argv, code", [
    ([], 64),
    (["decide", "--eq", "x=1"], 64),
    (["decide", "--group", GROUP], 64),
    (["frobnicate"], 64),
    (["decide", "--group", GROUP, "--eq", "x^=1"], 65),
    (["decide", "--group", GROUP, "--eq", "a7 = x"], 65),
    (["decide", "--group", "/no/such/file.grp", "--eq", "x=1"], 65),
    (["decide", "--group", GROUP, "--eq-file", "/no/such/eq"], 65),
    (["encode", "--target", "two-step", "--system", "/no/such.dioph"], 65),
])
def test_exit_codes(argv, code):
    assert call(*argv)[0] == code


def test_invalid_presentation_is_input_error(tmp_path):
    f = tmp_path / "bad.grp"
    f.write_text("n = 1\nl = [2]\n[a1, b1] -> 1\n")
    code, _, err = call("decide", "--group", str(f), "--eq", "x = 1")
    assert code == 65 and "b1" in err


def test_reduce():
    code, out, _ = call("reduce", "--group", GROUP, "--eq", "x^2*a1^-1 = 1", "--format", "json")
    report = json.loads(out)
    assert code == 0 and len(report["branches"]) == 1
    code, out, _ = call("reduce", "--group", str(DATA / "torsion.grp"), "--eq", "[a1,x] = d1")
    assert code == 0 and "branches: 4" in out


def test_encode_then_verify(tmp_path):
    code, out, _ = call("encode", "--target", "two-step", "--rank", "2", "--system", str(DATA / "square.dioph"))
    assert code == 0
    lines = [ln for ln in out.strip().splitlines() if not ln.startswith(("#", "vars:"))]
    assert lines[0] == "[a1,a2]^-4*[y1,yp1] = 1" and len(lines) == 4
    system = tmp_path / "enc.txt"
    system.write_text(out)
    good = call("verify", "--system", str(system), "--assignment", "y1=a1^2; yp1=a2^2")
    bad = call("verify", "--system", str(system), "--assignment", "y1=a1^3; yp1=a2^3")
    assert good[0] == 0 and bad[0] == 1


def test_encode_higher_step():
    code, out, _ = call("encode", "--target", "higher-step", "--system", str(DATA / "product.dioph"))
    main = out.strip().splitlines()[-1]
    assert code == 0 and main == "[[a1,a2],a2]^-6*[[a1,y1],y2] = 1"
    code, _, _ = call("verify", "--eq", main, "--step", "3", "--assignment", "y1=a2^2; y2=a2^3")
    assert code == 0


def test_verify_in_a_presentation():
    assert call("verify", "--group", GROUP, "--eq", "x^2 = a1^2*a2^2*c^-1", "--assignment", "x=a1*a2")[0] == 0
    assert call("verify", "--group", GROUP, "--eq", "x^2 = a1^2", "--assignment", "x=a2")[0] == 1


def test_oracle_search():
    code, out, _ = call("oracle-search", "--group", GROUP, "--eq", "[a1,x]=c", "--bound", "2", "--format", "json")
    assert code == 0 and json.loads(out)["assignment"]["x"]["word"] == "a2"
    assert call("oracle-search", "--group", GROUP, "--eq", "x^2=a1", "--bound", "2")[0] == 1
    assert call("oracle-search", "--group", GROUP, "--eq", "x*y=1", "--bound", "9", "--budget", "10")[0] == 2


# -- properties -------------------------------------------------------------


def test_reports_are_byte_identical():
    for eq in ["[a1,x]=c", "x^2=a1", "[x,y]=c^3*a1^2", "x^2*y^-1*a1*y = a2"]:
        for fmt in ("text", "json"):
            runs = {call("decide", "--group", GROUP, "--eq", eq, "--format", fmt)[1] for _ in range(3)}
            assert len(runs) == 1


def _rewrites(lhs, rhs):
    yield f"{lhs} = {rhs}"
    yield f"({lhs})^1 = ({rhs})"
    yield f"({lhs})*({rhs})^-1 = 1"
    yield f"{lhs}*1 = 1*{rhs}"


def test_verdict_invariant_under_rewrites():
    rng = random.Random(11)
    for _ in range(25):
        lhs, rhs = random_word(rng, ["x", "y"], max_len=5), random_word(rng, ["x"], max_len=3)
        verdicts = {decide_json(eq)[1]["verdict"] for eq in _rewrites(lhs, rhs)}
        assert len(verdicts) == 1, (lhs, rhs, verdicts)
