import json
import shutil
import subprocess
import sys

import pytest

from maniforge.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out else None), out.err


@pytest.fixture
def work(tmp_path, data_dir):
    for name in ("square.mpx", "hexagon.mpx", "nonpolytopal_hexagon.ext"):
        shutil.copy(data_dir / name, tmp_path / name)
    (tmp_path / "id.ext").write_text("extender\nbase square.mpx\n")
    (tmp_path / "tor.ext").write_text("extender\nbase square.mpx\nrn: 5 4 7 6 1 0 3 2\n")
    (tmp_path / "ditope.ext").write_text("extender\nbase square.mpx\ngroup cyclic 2\n"
                                         "xi 0 g\nxi 2 g\nxi 4 g\nxi 6 g\n")
    (tmp_path / "co.ext").write_text("coextender\nbase square.mpx\ngroup cyclic 2\n"
                                     "xi 0 g\nxi 1 g\nxi 3 g\nxi 5 g\n")
    return tmp_path


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0
    assert "toroid44" in [c["name"] for c in out["results"]["constructions"]]


def test_build_and_validate(capsys, work):
    code, out, _ = run(capsys, "build", "toroid44", "3", "2", "-o", str(work / "t.mpx"),
                       "--ext", str(work / "t.ext"), "--dot", str(work / "t.dot"))
    assert code == 0 and out["results"]["flags"] == 48
    assert (work / "t.base.mpx").exists() and (work / "t.dot").exists()
    code, out, _ = run(capsys, "validate", str(work / "t.mpx"))
    assert code == 0 and out["results"]["polytopal"]
    code, out, _ = run(capsys, "extend", str(work / "t.ext"))
    assert code == 0 and out["results"]["flags"] == 48


def test_build_two_hat_cube(capsys, work):
    code, out, _ = run(capsys, "build", "two-hat", "--seed", "cube3", "-o", str(work / "o.mpx"))
    assert code == 0 and out["results"]["flags"] == 3072


def test_nonpolytopal_exit_code(capsys, work):
    code, out, _ = run(capsys, "extend", str(work / "nonpolytopal_hexagon.ext"), "-o", str(work / "w.mpx"))
    assert code == 0
    code, out, _ = run(capsys, "validate", str(work / "w.mpx"))
    assert code == 1
    assert out["results"]["polytopal_witness"] == [1, 0, 0, 2]


def test_input_errors(capsys, work):
    (work / "bad.mpx").write_text("mpx 1\nrank 1\nflags 2\nadj 0: 1 9\n")
    code, out, err = run(capsys, "validate", str(work / "bad.mpx"))
    assert code == 2 and out is None and ":4:" in err
    assert run(capsys, "build", "two-hat", "--seed", "nosuch")[0] == 2
    assert run(capsys, "build", "toroid44", "3")[0] == 2
    assert run(capsys, "validate", str(work / "missing.mpx"))[0] == 2


def test_universal(capsys, work):
    code, out, _ = run(capsys, "universal", "--pre", str(work / "id.ext"), "--radius", "3", "--stats")
    res = out["results"]
    assert code == 0 and res["census"] == [1, 4, 12, 36] and res["interior_ok"]
    assert res["rn_order"] == "infinite"


def test_friendly_and_stg(capsys, work):
    code, out, _ = run(capsys, "friendly", "--pre", str(work / "tor.ext"), "--oracle")
    assert code == 0 and out["results"]["friendly_order"] == 8 and out["results"]["oracle_agrees"]
    code, out, _ = run(capsys, "stg-universal", "--pre", str(work / "id.ext"))
    assert out["results"]["stg"]["nodes"] == 1
    code, out, _ = run(capsys, "stg", str(work / "square.mpx"))
    assert out["results"]["orbits"] == 1


def test_caps_are_honoured(capsys, work, monkeypatch):
    monkeypatch.setenv("FORGE_CAPS", "heart=4")
    code, _, err = run(capsys, "friendly", "--pre", str(work / "id.ext"), "--oracle")
    assert code == 2 and "FORGE_CAPS" in err


def test_univ_iso_and_unique(capsys, work):
    code, out, _ = run(capsys, "univ-iso", "--pre1", str(work / "id.ext"), "--pre2", str(work / "tor.ext"))
    assert code == 0 and out["results"]["isomorphic"]
    run(capsys, "build", "seed", "pyramid", "-o", str(work / "p.mpx"))
    code, out, _ = run(capsys, "unique-universal", str(work / "p.mpx"))
    assert code == 1 and out["results"]["witness"]["facet"] != out["results"]["witness"]["other_facet"]
    assert run(capsys, "unique-universal", str(work / "square.mpx"))[0] == 0


def test_amalgamate(capsys, work):
    code, out, _ = run(capsys, "amalgamate", "--coext", str(work / "co.ext"), "--ext", str(work / "ditope.ext"),
                       "-o", str(work / "a.mpx"))
    assert code == 0 and out["results"]["flags"] == 32 and out["results"]["flat"]
    (work / "badco.ext").write_text("coextender\nbase square.mpx\nr-1: 0 2 1 3 4 5 6 7\n"
                                    "group elemabelian2 1\nxi 0 1\nxi 1 e0\nxi 3 1\nxi 5 1\n")
    run(capsys, "build", "toroid44", "3", "2", "--ext", str(work / "t.ext"))
    code, out, _ = run(capsys, "amalgamate", "--coext", str(work / "badco.ext"), "--ext", str(work / "t.ext"))
    assert code == 1 and out["results"]["witness"] == 1
    assert run(capsys, "amalgamate", "--coext", str(work / "ditope.ext"), "--ext", str(work / "ditope.ext"))[0] == 2


def test_iso(capsys, work):
    run(capsys, "build", "two-hat", "--seed", "square", "-o", str(work / "a.mpx"))
    run(capsys, "build", "toroid44", "4", "4", "-o", str(work / "b.mpx"))
    run(capsys, "build", "toroid44", "8", "2", "-o", str(work / "c.mpx"))
    assert run(capsys, "iso", str(work / "a.mpx"), str(work / "b.mpx"))[0] == 0
    assert run(capsys, "iso", str(work / "a.mpx"), str(work / "c.mpx"))[0] == 1


def test_output_is_deterministic(capsys, work):
    first = run(capsys, "stg", str(work / "hexagon.mpx"))[1]
    second = run(capsys, "stg", str(work / "hexagon.mpx"))[1]
    assert first == second


def test_accept_subset(capsys, work):
    code, out, err = run(capsys, "accept", "--criteria", "9,10", "--report", str(work / "r.json"))
    assert code == 0 and out["results"]["all_passed"]
    assert "[PASS] criterion  9" in err
    assert json.loads((work / "r.json").read_text()) == out
    assert run(capsys, "accept", "--criteria", "12")[0] == 2


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "maniforge.cli", "catalog", "list"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["operation"] == "catalog"
