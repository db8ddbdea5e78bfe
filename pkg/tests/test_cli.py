import io
import json
import os
import subprocess
import sys

import pytest

from matgrass.cli import run
from matgrass.fixtures import data_dir, degen_matroids
from matgrass.io import read_bundle, read_om, write_om


def data(name):
    return os.path.join(data_dir(), name)


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def call_json(*argv):
    code, text = call("--json", *argv)
    return code, json.loads(text)


def test_macp_homology_of_the_circle():
    code, text = call("macp", "-k", "1", "-n", "2", "--homology")
    assert code == 0
    assert "mod 2 Betti numbers (1,1)" in text
    code, rep = call_json("macp", "-k", "1", "-n", "3", "--integer")
    assert rep["results"]["betti_gf2"] == [1, 1, 1]
    assert rep["results"]["integer_homology"][1] == {"free": 0, "torsion": [2]}


def test_moebius_stiefel_whitney():
    code, text = call("sw", data("mobius.mb"))
    assert code == 0
    assert "w = 1 + w1" in text and "w1: nonzero" in text
    code, rep = call_json("sw", data("mobius.mb"))
    assert rep["results"]["classes"][1]["zero"] is False


def test_degeneration_audit():
    code, text = call("bundle", "audit", data("degen.mb"))
    assert code == 0
    assert "sphere fibers: 2/2 have the mod 2 homology of S^1" in text
    assert "disk fibers: 2/2" in text


def test_babson_report():
    code, rep = call_json("bundle", "babson", data("degen.mb"))
    assert code == 0
    assert rep["results"]["sphere"]["summary"] == "criterion-certified"
    assert rep["results"]["disk"]["failures"] == []


def test_non_orientable_euler_exits_one():
    code, _ = call("euler", data("mobius.mb"))
    assert code == 1
    code, rep = call_json("euler", data("mobius.mb"))
    assert rep["ok"] is False and rep["results"]["orientable"] is False


def test_orientation_answers_exit_zero():
    code, rep = call_json("orient", data("mobius.mb"))
    assert code == 0 and rep["results"]["orientation"] is None
    code, rep = call_json("orient", data("degen.mb"))
    assert code == 0 and set(rep["results"]["orientation"]) == {"0", "1"}


def test_euler_of_a_sum_of_two_canonical_lines():
    code, rep = call_json("euler", data("canonical2.mb"))
    assert code == 0
    assert rep["results"]["zero"] is False
    assert rep["results"]["pullback_iso_verified"] is True


def test_fields_check():
    code, text = call("fields", "check", data("degen.mb"), data("degen_field.vf"))
    assert code == 0
    assert "w2(xi) = 0: ok" in text and "not certified" in text


def test_bundle_sum_relabels_and_writes(tmp_path):
    out = tmp_path / "sum.mb"
    code, rep = call_json("bundle", "sum", data("mobius.mb"), data("mobius.mb"), "--out", str(out))
    assert code == 0
    assert rep["results"]["elements"] == ["1#1", "2#1", "1#2", "2#2"]
    assert read_bundle(str(out)).rank == 2


def test_enum_gamma_and_homology(tmp_path):
    code, rep = call_json("enum", "--elements", "a,b,c", "--rank", "1", "--out", str(tmp_path / "oms"))
    assert code == 0 and rep["results"]["count"] == 13
    assert len(os.listdir(tmp_path / "oms")) == 13
    m1, _ = degen_matroids()
    om = tmp_path / "m1.om"
    write_om(m1, str(om))
    code, rep = call_json("gamma", "-k", "1", "--om", str(om), "--homology")
    assert code == 0 and rep["results"]["components"] == 1
    code, rep = call_json("homology", "--om", str(om))
    assert rep["results"]["reduced_betti_gf2"] == [0, 1]
    poset = tmp_path / "macp.poset"
    assert call("macp", "-k", "1", "-n", "2", "--poset", str(poset))[0] == 0
    code, rep = call_json("homology", "--poset", str(poset), "--integer", "--cocycles")
    assert rep["results"]["betti_gf2"] == [1, 1]
    assert len(rep["results"]["cocycles"]["1"]) == 1


def test_mu_command(tmp_path):
    cfg = tmp_path / "degen.cfg"
    cfg.write_text("a: 1 0\nb: 0 1\nc: -1 1\n")
    plane = tmp_path / "plane.txt"
    plane.write_text("1 0\n0 1\n")
    out = tmp_path / "m.om"
    code, rep = call_json("mu", "--config", str(cfg), "--plane", str(plane), "--out", str(out))
    assert code == 0 and rep["results"]["rank"] == 2
    assert read_om(str(out)) == degen_matroids()[0]


def test_input_errors_exit_two(tmp_path, capsys):
    assert call("sw", str(tmp_path / "missing.mb"))[0] == 2
    bad = tmp_path / "bad.om"
    bad.write_text("elements: a\ncovectors:\n+\n")
    assert call("homology", "--om", str(bad))[0] == 2
    assert call("homology")[0] == 2
    assert call("enum", "--elements", "a,b,c,d,e,f,g", "--rank", "2")[0] == 2
    with pytest.raises(SystemExit) as err:
        call("nonsense")
    assert err.value.code == 2
    assert "error" in capsys.readouterr().err


def test_json_is_byte_identical():
    argv = ["--json", "sw", data("canonical13.mb")]
    assert call(*argv)[1] == call(*argv)[1]
    # the flag may also follow the subcommand
    _, text = call("sw", "--json", data("canonical13.mb"))
    assert json.loads(text)["results"] == json.loads(call(*argv)[1])["results"]


def test_timing_is_opt_in():
    _, rep = call_json("macp", "-k", "1", "-n", "2")
    assert "timing_seconds" not in rep
    _, rep = call_json("--timing", "macp", "-k", "1", "-n", "2")
    assert rep["timing_seconds"] >= 0


def test_report_digest_covers_referenced_files():
    _, rep = call_json("sw", data("degen.mb"))
    files = rep["inputs"]["files"]
    assert files[0].endswith("degen.mb")
    assert {os.path.basename(f) for f in files[1:]} == {"degen_0.om", "degen_1.om"}
    assert len(rep["inputs"]["sha256"]) == 64


def test_selftest():
    code, text = call("selftest")
    assert code == 0
    assert "15 fixtures checked, 0 failure(s)" in text


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "matgrass.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("matgrass ")
