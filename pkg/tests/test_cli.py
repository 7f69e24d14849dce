import io
import json

import pytest

from qmatsym.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_nf_example():
    code, out = call("nf", "--m", "1", "--n", "1", "--expr", "dt[1,1] t[1,1]")
    assert code == 0 and out.strip() == "(q^-2) t[1,1] dt[1,1]"


def test_parse_and_index_errors_exit_2():
    assert call("nf", "--m", "1", "--n", "1", "--expr", "t[1,1] +")[0] == 2
    assert call("nf", "--m", "1", "--n", "2", "--expr", "t[3,1]")[0] == 2
    assert call("bogus")[0] == 2


def test_rhat_n5():
    code, out = call("rhat", "--N", "5")
    assert code == 0
    assert "PASS  Hecke identity" in out and "PASS  braid relation" in out


def test_pair_and_minor():
    assert call("pair", "--N", "2", "--func", "u[1,1]", "--word", "K_1")[1].strip() == "q"
    assert call("pair", "--N", "2", "--func", "u[1,1] u[2,2]", "--word", "1")[1].strip() == "1"
    code, out = call("minor", "--m", "2", "--n", "1", "--cols", "1,3")
    assert code == 0 and out.strip() == "(-q) u[1,3] u[2,1] + u[1,1] u[2,3]"
    assert call("minor", "--m", "2", "--n", "1", "--cols", "3,1")[0] == 2


def test_hilbert():
    code, out = call("hilbert", "--m", "1", "--n", "2", "--maxdeg", "2")
    assert code == 0 and "status: pass" in out


def test_json_report_schema():
    code, out = call("verify", "--suite", "module-algebra", "--m", "1", "--n", "1",
                     "--maxdeg", "3", "--json")
    assert code == 0
    rep = json.loads(out)
    assert set(rep) >= {"suite", "params", "checks", "status"}
    assert rep["suite"] == "module-algebra" and rep["status"] == "pass"
    assert rep["params"]["m"] == 1 and rep["params"]["maxdeg"] == 3
    for c in rep["checks"]:
        assert set(c) <= {"name", "status", "witness"}
        assert c["status"] in ("pass", "fail")


def test_q0_is_reported_and_checked():
    code, out = call("verify", "--suite", "module-algebra", "--m", "1", "--n", "1",
                     "--q0", "2", "--json")
    assert code == 0 and json.loads(out)["params"]["q0"] == "2"
    assert call("verify", "--suite", "module-algebra", "--m", "1", "--n", "1", "--q0", "1")[0] == 2


@pytest.mark.parametrize("argv", [
    ("verify", "--suite", "module-algebra", "--m", "1", "--n", "1", "--inject", "corrupt-k"),
    ("verify", "--suite", "flatness", "--m", "1", "--n", "2", "--maxdeg", "2",
     "--inject", "drop-relation"),
    ("verify", "--suite", "embed", "--m", "1", "--n", "2", "--maxdeg", "2",
     "--inject", "drop-relation"),
    ("verify", "--suite", "rhat", "--N", "3", "--inject", "flip-rhat"),
])
def test_fault_injection_exit_1(argv):
    code, out = call(*argv, "--json")
    assert code == 1
    rep = json.loads(out)
    assert rep["status"] == "fail"
    assert any(c["status"] == "fail" and c.get("witness") for c in rep["checks"])


def test_derive_action_writes_golden(tmp_path):
    code, out = call("derive-action", "--m", "1", "--n", "1", "--out", str(tmp_path))
    assert code == 0
    js = json.loads((tmp_path / "1x1" / "action.json").read_text())
    assert js["K_1"]["t[1,1]"] == "(q^-2) t[1,1]"
    assert (tmp_path / "1x1" / "rules.json").exists()
