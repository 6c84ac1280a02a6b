import json
import os
import shutil
import subprocess
import sys

import pytest

from sbp import serialize as io
from sbp.cli import main
from sbp.corpus import case_diagram, chain_extension, record
from sbp.monoid import identity_map


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out), out


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(io.dumps(obj))
    return str(path)


def test_examples_list(capsys):
    code, out, _ = run(capsys, "examples", "list")
    assert code == 0
    assert [line.split()[0] for line in out.splitlines()][:3] == ["A1", "A2", "A3"]


def test_examples_run_a1(capsys):
    code, rep, _ = run_json(capsys, "examples", "run", "A1")
    assert code == 1
    assert rep["witnesses"] == [{"law": "kq+sp=1", "witness": ["d"], "lhs": "c", "rhs": "d"}]
    assert rep["verdicts"]["expectations_reproduced"] is True


def test_examples_run_a6(capsys):
    code, rep, _ = run_json(capsys, "examples", "run", "A6")
    assert code == 0
    assert rep["verdicts"]["verified"] is True and rep["verdicts"]["commutative"] is True


def test_examples_run_all(capsys):
    code, rep, _ = run_json(capsys, "examples", "run", "--all")
    assert code == 0 and all(rep["verdicts"].values()) and len(rep["verdicts"]) == 13


def test_report_field_order_and_byte_round_trip(capsys, tmp_path):
    path = write(tmp_path, "ext.json", io.diagram_to_json(chain_extension()))
    code, rep, raw = run_json(capsys, "verify", path)
    assert code == 0
    assert list(rep) == ["command", "inputs", "ok", "verdicts", "witnesses", "timing"]
    assert rep["inputs"][path].startswith("sha256:")
    assert io.dumps(io.loads(raw)) == raw


def test_reports_are_deterministic_apart_from_timing(capsys, tmp_path):
    path = write(tmp_path, "a1.json", io.diagram_to_json(case_diagram(1)))
    reports = []
    for _ in range(2):
        _, rep, _ = run_json(capsys, "verify", path, "--exhaustive-witnesses")
        rep.pop("timing")
        reports.append(rep)
    assert reports[0] == reports[1]


def test_verify_failure_and_flags_anywhere(capsys, tmp_path):
    path = write(tmp_path, "a1.json", io.diagram_to_json(case_diagram(1)))
    code, out, _ = run(capsys, "verify", path)
    assert code == 1 and "kq+sp=1" in out
    code, _, _ = run(capsys, "--json", "verify", path)
    assert code == 1


def test_schreier(capsys, tmp_path):
    path = write(tmp_path, "ext.json", io.diagram_to_json(chain_extension()))
    code, rep, _ = run_json(capsys, "schreier", path)
    assert code == 1
    assert rep["verdicts"]["image_size"] == 3 and rep["verdicts"]["product_size"] == 4
    assert rep["witnesses"] == [{"law": "x^b=x", "witness": ["a", "b"], "lhs": "1", "rhs": "a"}]


def test_cokernel_exit_codes(capsys, tmp_path):
    code, rep, _ = run_json(capsys, "cokernel",
                            write(tmp_path, "a2.json", io.diagram_to_json(case_diagram(2))))
    assert code == 1 and rep["verdicts"] == {"kernel": True, "cokernel": False}
    code, _, _ = run(capsys, "cokernel",
                     write(tmp_path, "a3.json", io.diagram_to_json(case_diagram(3))))
    assert code == 0


def test_extract_synthesize_roundtrip_chain(capsys, tmp_path):
    d = write(tmp_path, "ext.json", io.diagram_to_json(chain_extension()))
    pa = str(tmp_path / "pa.json")
    syn = str(tmp_path / "syn.json")
    assert run(capsys, "extract", d, "-o", pa)[0] == 0
    assert run(capsys, "pa-verify", pa)[0] == 0
    assert run(capsys, "synthesize", pa, "-o", syn)[0] == 0
    assert run(capsys, "roundtrip", pa)[0] == 0
    assert run(capsys, "roundtrip", syn)[0] == 0
    assert run(capsys, "roundtrip", d)[0] == 0


def test_pa_verify_failure(capsys, tmp_path):
    d = chain_extension()
    obj = {"X": io.monoid_to_json(d.X), "B": io.monoid_to_json(d.B),
           "rho": {"1,1": "1", "1,b": "1", "a,1": "a", "a,b": "a"},
           "phi": {"1,1": "1", "1,a": "a", "b,1": "1", "b,a": "1"},
           "gamma": {"1,1": "1", "1,b": "a", "b,1": "1", "b,b": "1"}}
    code, rep, _ = run_json(capsys, "pa-verify", write(tmp_path, "pa.json", obj))
    assert code == 1
    assert rep["verdicts"]["factor-unit"] is False


def test_pullback(capsys, tmp_path):
    d = chain_extension()
    path = write(tmp_path, "ext.json", io.diagram_to_json(d))
    h = write(tmp_path, "h.json", io.map_to_json(identity_map(d.B)))
    code, rep, _ = run_json(capsys, "pullback", path, h)
    assert code == 0 and rep["verdicts"]["size"] == 3


def test_construct_and_unconstrained(capsys, tmp_path):
    path = write(tmp_path, "seed.json", record("seed-chain").bundle)
    code, rep, _ = run_json(capsys, "construct", path)
    assert code == 0 and rep["verdicts"]["structures"] == 2
    assert rep["witnesses"][0]["law"] == "⊕≠+"
    code, rep, _ = run_json(capsys, "construct", path, "--unconstrained")
    assert code == 0 and rep["verdicts"]["structures"] > 2
    code, rep, _ = run_json(capsys, "construct", path, "--budget", "1")
    assert code == 1 and rep["verdicts"] == {"complete": False}


def test_enumerate_and_complete(capsys, tmp_path):
    d = chain_extension()
    x = write(tmp_path, "x.json", io.monoid_to_json(d.X))
    b = write(tmp_path, "b.json", io.monoid_to_json(d.B))
    code, rep, _ = run_json(capsys, "enumerate", x, b, "--jobs", "2")
    assert code == 0 and rep["verdicts"]["pseudo_actions"] == 5
    code, rep, _ = run_json(capsys, "enumerate", x, b, "--budget", "2")
    assert code == 1 and rep["verdicts"]["complete"] is False
    obj = io.diagram_to_json(d)
    ext = write(tmp_path, "ext.json", {k: obj[k] for k in ("monoids", "X", "A", "B", "k", "p")})
    code, rep, _ = run_json(capsys, "complete", ext)
    assert code == 0 and rep["verdicts"]["completions"] >= 1


def test_nat_demo(capsys):
    code, rep, _ = run_json(capsys, "nat-demo")
    assert code == 0 and rep["verdicts"]["label"] == "partial verification (bounded)"


def test_validate(capsys, tmp_path):
    good = write(tmp_path, "m.json", io.monoid_to_json(chain_extension().A))
    assert run(capsys, "validate", good)[0] == 0
    bad = write(tmp_path, "bad.json", {"elements": ["e", "x", "y"], "identity": "e",
                                       "table": [["e", "x", "y"], ["x", "y", "y"],
                                                 ["y", "x", "y"]]})
    code, rep, _ = run_json(capsys, "validate", bad)
    assert code == 1 and rep["witnesses"][0]["law"] == "associativity"
    ragged = write(tmp_path, "r.json", {"elements": ["e", "x"], "identity": "e",
                                        "table": [["e", "x"]]})
    assert run(capsys, "validate", ragged)[0] == 2


def test_max_size(capsys, tmp_path):
    path = write(tmp_path, "ext.json", io.diagram_to_json(chain_extension()))
    assert run(capsys, "verify", path, "--max-size", "2")[0] == 2
    assert run(capsys, "--max-size", "3", "verify", path)[0] == 0
    assert "SBP_MAX_SIZE" not in os.environ


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["verify"],
    ["verify", "x.json", "--frobnicate"],
    ["examples", "run"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "usage" in err


def test_input_errors(capsys, tmp_path):
    code, _, err = run(capsys, "verify", str(tmp_path / "missing.json"))
    assert code == 2 and "cannot read" in err
    dup = tmp_path / "dup.json"
    dup.write_text('{"X": "a", "X": "b"}')
    code, rep, _ = run_json(capsys, "verify", str(dup))
    assert code == 2 and "duplicate" in rep["verdicts"]["error"]
    assert run(capsys, "examples", "run", "Z9")[0] == 2


def test_installed_entry_point():
    exe = shutil.which("sbp")
    cmd = [exe] if exe else [sys.executable, "-m", "sbp.cli"]
    proc = subprocess.run(cmd + ["examples", "run", "A6", "--json"], capture_output=True,
                          text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "examples"
