import csv
import hashlib
import io
import json

import numpy as np
import pytest

from paulilab import cli, white_dwarf


def run(argv, monkeypatch=None):
    buf = io.StringIO()
    code = cli.dispatch(argv, stdout=buf)
    return code, buf.getvalue()


def run_json(argv):
    code, text = run(argv + ["--json"])
    assert code == 0
    doc = json.loads(text)
    return doc, {r["name"]: r for r in doc["results"]}


def test_zeeman_g_table():
    doc, rec = run_json(["zeeman", "--L", "1", "--S", "1/2", "--g"])
    assert rec["g(J=3/2)"]["value"] == "4/3"
    assert rec["g(J=1/2)"]["value"] == "2/3"
    assert rec["mean g"]["value"] == "1"


def test_zeeman_text_output():
    code, text = run(["zeeman", "--L", "1", "--S", "1/2"])
    assert code == 0
    assert "4/3" in text and "2/3" in text


def test_zeeman_J0_reported():
    _, rec = run_json(["zeeman", "--L", "1", "--S", "1"])
    assert "undefined" in rec["g(J=0)"]["value"]


def test_tf_atom_energy():
    _, rec = run_json(["tf-atom", "--Z", "1"])
    assert rec["energy"]["value"] == pytest.approx(-1.5375, rel=1e-3)
    assert rec["energy"]["units"] == "Ry"
    assert rec["energy"]["display"] == "-1.53749"


def test_wd_sweep_csv(tmp_path):
    out = tmp_path / "mr.csv"
    code, _ = run(["wd", "--ZA", "0.5", "--nc", "sweep", "--curve-out", str(out)])
    assert code == 0
    raw = out.read_bytes()
    assert b"\r\n" in raw
    rows = list(csv.reader(io.StringIO(raw.decode())))
    assert rows[0] == ["n_c", "N", "M_kg", "M_solar", "R_m", "E_TF"]
    data = np.array(rows[1:], dtype=float)
    M, R = data[:, 3], data[:, 4]
    assert np.all(np.diff(M) > 0)
    high = M > 0.5 * M.max()
    assert np.all(np.diff(R[high]) < 0)


def test_wd_single_value():
    _, rec = run_json(["wd", "--mu-per-electron", "2", "--nc", "1e36"])
    assert rec["hydrostatic residual"]["value"] <= 1e-6
    assert rec["mass"]["units"] == "M_sun"
    assert rec["critical kappa^(3/2) N"]["value"] == pytest.approx(3.098, rel=1e-3)


@pytest.mark.parametrize("which", ["shell", "size", "lt", "boson", "sobolev"])
def test_bounds_variants(which):
    _, rec = run_json(["bounds", "--N", "10", "--Z", "10", "--which", which])
    assert all(r["units"] is not None for r in rec.values())


def test_star_labels():
    _, rec = run_json(["star", "--N", "1e54"])
    assert rec["E0"]["label"] == "model"
    assert rec["rho0"]["units"] == "g/cm^3"


def test_constants():
    _, rec = run_json(["constants"])
    assert rec["tag"]["value"] == "CODATA2018"


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["zeeman", "--L", "1"],
    ["zeeman", "--L", "1", "--S", "1/3"],
    ["tf-atom", "--Z", "1", "--frobnicate"],
    ["wd", "--ZA", "0.5", "--nc", "sweep:1:2"],
    ["star", "--N", "0"],
])
def test_usage_errors(argv, capsys):
    code, _ = run(argv)
    assert code == 2


def test_solver_error(monkeypatch):
    def boom(*a, **k):
        raise white_dwarf.UnboundedProfile("unbounded profile", {"n_c": 1.0})

    monkeypatch.setattr(white_dwarf, "solve_structure", boom)
    code, _ = run(["wd", "--ZA", "0.5", "--nc", "1e36"])
    assert code == 1


def test_deterministic_with_epoch(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    a = run(["tf-atom", "--Z", "3", "--json"])[1]
    b = run(["tf-atom", "--Z", "3", "--json"])[1]
    assert a == b
    assert json.loads(a)["manifest"]["timestamp"].startswith("2023-11-14")


def test_manifest_digests(tmp_path):
    curve = tmp_path / "c.csv"
    man = tmp_path / "m.json"
    code, _ = run(["wd", "--ZA", "0.5", "--nc", "sweep:31:40:10", "--curve-out", str(curve),
                   "--manifest-out", str(man)])
    assert code == 0
    manifest = json.loads(man.read_text())
    assert manifest["digests"][str(curve)] == hashlib.sha256(curve.read_bytes()).hexdigest()
    assert manifest["subcommand"] == "wd"
    assert manifest["parameters"]["ZA"] == 0.5
    assert manifest["constants_tag"] == "CODATA2018"


def test_record_types():
    from fractions import Fraction
    assert cli.record("x", Fraction(4, 3))["value"] == "4/3"
    r = cli.record("y", 0.123456789, "m")
    assert r["value"] == 0.123456789 and r["display"] == "0.123457"
    assert cli.record("z", None)["display"] == "n/a"
