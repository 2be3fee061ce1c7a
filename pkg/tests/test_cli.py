from __future__ import annotations

import json
import subprocess
import sys

import pytest

from mubforge.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_catalog_json_round_trips(capsys, tmp_path):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    data = json.loads(out)
    names = {e["name"] for e in data["families"]}
    assert {"field", "suzuki", "bblp", "pseudo-planar", "coulter-matthews"} <= names
    assert json.loads(json.dumps(data)) == data
    code, out, _ = run(capsys, "catalog", "--format", "text")
    assert "penttila-williams" in out


def test_build_mub_field_9(capsys, tmp_path):
    path = tmp_path / "f9.json"
    code, out, _ = run(capsys, "build", "mub", "--family", "field", "--q", "9", "--out", str(path))
    rep = json.loads(out)["report"]
    assert code == 0 and rep["passed"] and rep["details"]["bases"] == 10
    assert len(json.loads(path.read_text())["bases"]) == 10


def test_build_spread_suzuki(capsys):
    code, out, _ = run(capsys, "build", "spread", "--family", "suzuki", "--q", "8")
    rep = json.loads(out)["report"]
    assert code == 0 and rep["details"]["members"] == 65


def test_build_bblp_full_with_timing(capsys):
    code, out, _ = run(capsys, "build", "mub", "--family", "bblp", "--q", "27", "--full", "--timing")
    d = json.loads(out)
    assert code == 0 and d["report"]["mode"] == "exact"
    assert d["timing_seconds"] >= 0


def test_output_is_byte_identical(capsys):
    argv = ["build", "mub", "--family", "field", "--q", "27", "--samples", "500", "--seed", "3"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    assert json.loads(a)["report"]["details"]["seed"] == 3


def test_verify_exported_field_5(capsys, tmp_path):
    path = tmp_path / "f5.json"
    assert run(capsys, "export", "--family", "field", "--q", "5", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0 and json.loads(out)["report"]["passed"]


def test_verify_spread_and_presemifield_files(capsys, tmp_path):
    sp = tmp_path / "sp.json"
    run(capsys, "build", "spread", "--family", "knuth", "--q", "9", "--out", str(sp))
    assert run(capsys, "verify", str(sp))[0] == 0
    ps = tmp_path / "ps.json"
    ps.write_text(json.dumps({"family": "albert-symplectic", "q": 27}))
    assert run(capsys, "verify", str(ps))[0] == 0


def test_verify_detects_planted_defect(capsys, tmp_path):
    path = tmp_path / "f5.json"
    run(capsys, "export", "--family", "field", "--q", "5", "--out", str(path))
    d = json.loads(path.read_text())
    d["bases"][1]["table"][0][1] = (d["bases"][1]["table"][0][1] + 2) % 5
    path.write_text(json.dumps(d))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 1 and not json.loads(out)["report"]["passed"]


def test_dual_albert_matches_catalog(capsys):
    code, out, _ = run(capsys, "dual", "--family", "albert", "--q", "27")
    d = json.loads(out)
    assert code == 0 and d["matches_catalog_partner"]["equal"]


@pytest.mark.parametrize("family,q", [("field", 16), ("albert", 27), ("pseudo-planar", 8)])
def test_compare_paths(capsys, family, q):
    code, out, _ = run(capsys, "compare", "--family", family, "--q", str(q))
    assert code == 0 and json.loads(out)["identical"]


def test_compare_files(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "export", "--family", "field", "--q", "3", "--out", str(a))
    run(capsys, "export", "--family", "field", "--q", "3", "--out", str(b))
    code, out, _ = run(capsys, "compare", str(a), str(b))
    assert code == 0


def test_export_csv(capsys, tmp_path):
    path = tmp_path / "f3.csv"
    assert run(capsys, "export", "--family", "field", "--q", "3", "--format", "csv", "--out", str(path))[0] == 0
    assert path.read_text().startswith("# floating-point values are non-authoritative")


@pytest.mark.parametrize("argv", [
    ["build", "mub", "--family", "field", "--q", "6"],
    ["build", "mub", "--family", "nope", "--q", "3"],
    ["build", "mub", "--family", "ganley", "--q", "9"],
    ["verify", "/nonexistent.json"],
    ["dual"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["build", "mub"])
    assert exc.value.code == 2


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "mubforge.cli", "catalog", "--format", "text"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "bblp" in res.stdout
