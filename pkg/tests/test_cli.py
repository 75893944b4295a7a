import json
import subprocess
import sys

import jsonschema
import pytest

from mixed_brieskorn import reporting as rp
from mixed_brieskorn.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, rp.loads(out)


def rows(rep):
    return {r["claim"]: r for r in rep["verdicts"]}


# --- classify ----------------------------------------------------------------------

def test_classify_t1(capsys):
    code, rep = report(capsys, "classify", "-a", "2,3", "-b", "0,0")
    assert code == 0
    r = rows(rep)
    assert r["surface type"]["symbolic"] == "T1"
    assert r["tangent cone"]["symbolic"] == "PlaneZ1Zero"
    assert r["multiplicity"]["symbolic"] == 2
    assert all("pass" not in row for row in rep["verdicts"])


def test_classify_submersion_and_weights(capsys):
    code, rep = report(capsys, "classify", "-a", "1,2", "-b", "1,1")
    r = rows(rep)
    assert r["topological submersion"]["symbolic"] is True
    assert r["weighted homogeneous type"]["symbolic"] == "r=(4, 3); d=12"
    assert r["topological normal form"]["symbolic"] == "z1 + z2^2"
    assert rep["data"]["weighted_type"] == {"r": ["4", "3"], "d": "12"}


def test_classify_echoes_user_order(capsys):
    _, rep = report(capsys, "classify", "-a", "3,2", "-b", "0,1")
    assert rep["inputs"]["a"] == [3, 2] and rep["inputs"]["canonical_a"] == [2, 3]
    assert rep["inputs"]["canonical_order"] == [2, 1]


@pytest.mark.parametrize("argv", [
    ["classify", "-a", "0,0", "-b", "1,1"],
    ["classify", "-a", "x,1", "-b", "1,1"],
    ["classify", "-a", "1,2", "-b", "1"],
    ["bogus"],
])
def test_input_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err


# --- compare -----------------------------------------------------------------------------

def test_compare_bilip_witness(capsys):
    _, rep = report(capsys, "compare", "-a", "2,2", "-b", "1,3", "-c", "2,2", "-d", "3,1")
    row = rep["verdicts"][0]
    assert row["symbolic"] == "Equivalent" and row["witness"] == "(1 2)" and row["ref"] == "class1"


def test_compare_top_submfam(capsys):
    code, rep = report(capsys, "compare", "-a", "1,2", "-b", "0,0", "-c", "2,2", "-d", "0,0",
                       "--mode", "top")
    assert code == 0
    assert rep["verdicts"][0]["symbolic"] == "NotEquivalent"
    assert rep["verdicts"][0]["ref"] == "submfam"


def test_compare_outer_tsam(capsys):
    _, rep = report(capsys, "compare", "-a", "0,3", "-b", "1,1", "-c", "0,2", "-d", "1,1",
                    "--mode", "outer")
    assert rep["verdicts"][0]["symbolic"] == "NotEquivalent"
    assert rep["verdicts"][0]["ref"] == "tsam"


def test_compare_ambient_needs_t1_t2(capsys):
    code, _, _ = run(capsys, "compare", "-a", "0,3", "-b", "1,1", "-c", "2,3", "-d", "0,0",
                     "--mode", "ambient")
    assert code == 2


def test_compare_undetermined_exits_0(capsys):
    code, rep = report(capsys, "compare", "-a", "1,1", "-b", "0,1", "-c", "1,3", "-d", "0,0")
    assert code == 0 and rep["verdicts"][0]["symbolic"] == "Undetermined"


# --- verify -------------------------------------------------------------------------------

def test_verify_beta(capsys):
    code, rep = report(capsys, "verify", "-a", "0,1", "-b", "1,1", "--checks", "beta")
    row = rep["verdicts"][0]
    assert code == 0 and row["symbolic"] == "3/2" and row["pass"] is True
    assert abs(row["numeric"] - 1.5) <= 0.05 * 1.5


def test_verify_cone_ne_t1(capsys, tmp_path):
    out = tmp_path / "rep.json"
    code, rep = report(capsys, "verify", "-a", "2,3", "-b", "0,0", "--checks", "cone,ne",
                       "--out", str(out))
    assert code == 0
    r = rows(rep)
    assert r["tangent cone kind"]["numeric"] == "PlaneZ1Zero"
    assert r["normally embedded"]["numeric"] is False
    assert r["inner/outer divergence exponent"]["numeric"] == pytest.approx(0.5, rel=0.1)
    assert rp.loads(out.read_text()) == rep


def test_verify_failure_exits_1(capsys):
    # the probe points of this horn stay at bounded inner/outer ratio
    code, rep = report(capsys, "verify", "-a", "0,1", "-b", "1,1", "--checks", "ne")
    assert code == 1 and rp.failed(rep)


def test_verify_unknown_check(capsys):
    assert run(capsys, "verify", "-a", "2,3", "-b", "0,0", "--checks", "foo")[0] == 2


def test_verify_geometric_needs_surface(capsys):
    assert run(capsys, "verify", "-a", "1,2,2", "-b", "0,0,0", "--checks", "cone")[0] == 2
    assert run(capsys, "verify", "-a", "1,2,2", "-b", "0,0,0", "--checks", "conj,mult")[0] == 0


def test_seed_env_overrides(capsys, monkeypatch):
    monkeypatch.setenv("BRIESKORN_SEED", "17")
    _, rep = report(capsys, "verify", "-a", "2,3", "-b", "1,0", "--checks", "mult", "--seed", "3")
    assert rep["seed"] == 17
    monkeypatch.setenv("BRIESKORN_SEED", "x")
    assert run(capsys, "verify", "-a", "2,3", "-b", "1,0", "--checks", "mult")[0] == 2


def test_reports_byte_identical_except_timestamp(capsys):
    argv = ["verify", "-a", "2,3", "-b", "1,0", "--checks", "conj,mult", "--seed", "5"]
    _, out1, _ = run(capsys, *argv)
    _, out2, _ = run(capsys, *argv)
    strip = lambda s: "\n".join(l for l in s.splitlines() if '"timestamp"' not in l)
    assert strip(out1) == strip(out2)


# --- enumerate and sample ----------------------------------------------------------------------

@pytest.mark.parametrize("a,bound,count", [("2,2", 2, 6), ("2,3", 1, 4), ("2,2", 0, 1)])
def test_enumerate(capsys, tmp_path, a, bound, count):
    out = tmp_path / "classes.csv"
    code, rep = report(capsys, "enumerate", "-a", a, "--b-bound", str(bound), "--out", str(out))
    r = rows(rep)
    assert code == 0 and r["bi-Lipschitz class count"]["symbolic"] == count
    assert r["topologically trivial family"]["symbolic"] is True
    lines = out.read_text().splitlines()
    assert len(lines) == count + 1
    assert {l.split(",")[4] for l in lines[1:]} == {"True"}


def test_enumerate_rejects_negative_bound(capsys):
    assert run(capsys, "enumerate", "-a", "2,2", "--b-bound", "-1")[0] == 2


def test_sample_csv(capsys, tmp_path):
    out = tmp_path / "pts.csv"
    code, rep = report(capsys, "sample", "-a", "2,3", "-b", "1,0", "--count", "50", "--out", str(out))
    assert code == 0 and rep["verdicts"][0]["pass"] is True
    lines = out.read_text().splitlines()
    assert lines[0] == "x1,y1,x2,y2,radius" and len(lines) == 51


# --- report schema --------------------------------------------------------------------------------

def test_report_round_trip_and_schema():
    rep = rp.make_report("x", {"a": [1]}, [rp.verdict("c", "l17", 1, 1.0, 0.1, True)], seed=1)
    assert rp.loads(rp.dumps(rep)) == rep
    with pytest.raises(jsonschema.ValidationError):
        rp.validate(dict(rep, extra=1))
    with pytest.raises(ValueError):
        rp.verdict("c", "nope", 1)


def test_pass_needs_both_values():
    assert "pass" not in rp.verdict("c", "l17", 1, None, None, True)
    assert rp.verdict("c", "l17", 1, 2, None, False)["pass"] is False


def test_write_atomic(tmp_path):
    p = tmp_path / "f.txt"
    rp.write_atomic(p, "one")
    rp.write_atomic(p, "two")
    assert p.read_text() == "two"
    assert [x.name for x in tmp_path.iterdir()] == ["f.txt"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mixed_brieskorn", "classify", "-a", "2,3", "-b", "0,0"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["command"] == "classify"
