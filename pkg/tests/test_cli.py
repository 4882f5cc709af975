import csv
import io
import json
import subprocess
import sys

import pytest

from shapthresh.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def data_of(text):
    return json.loads(text)["data"]


MAJ3 = '{"kind": "majority", "n": 3}'
AND2 = '{"kind": "and", "n": 2}'
TRIBES = '{"kind": "tribes", "m": 2, "w": 2}'


def test_power_exact(capsys):
    code, out, _ = run(capsys, "power", MAJ3)
    assert code == 0
    vals = [r["value"] for r in data_of(out)["rows"]]
    assert vals == pytest.approx([1 / 3] * 3, abs=1e-15)


def test_power_owen_csv(capsys):
    code, out, err = run(capsys, "power", AND2, "--method", "owen", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["player", "value"]
    assert [float(r[1]) for r in rows[1:]] == [0.5, 0.5]
    assert err.startswith("manifest: ")


def test_power_banzhaf(capsys):
    _, out, _ = run(capsys, "power", TRIBES, "--method", "banzhaf")
    assert [r["value"] for r in data_of(out)["rows"]] == pytest.approx([0.375] * 4, abs=1e-15)


def test_power_sampled_needs_seed(capsys):
    code, _, err = run(capsys, "power", MAJ3, "--method", "sampled")
    assert code == 2 and "seed" in err


def test_curve(capsys):
    _, out, _ = run(capsys, "curve", AND2, "--points", "3")
    rows = data_of(out)["rows"]
    assert [r["p"] for r in rows] == [0.25, 0.5, 0.75]
    assert [r["mu"] for r in rows] == pytest.approx([0.0625, 0.25, 0.5625], abs=1e-15)
    for r in rows:
        assert abs(r["total_influence"] - r["mu_derivative"]) <= 1e-9


def test_curve_dictator_and_majority(capsys):
    _, out, _ = run(capsys, "curve", '{"kind": "dictator", "n": 1}', "--points", "9")
    for r in data_of(out)["rows"]:
        assert r["mu"] == pytest.approx(r["p"], abs=1e-15)
    _, out, _ = run(capsys, "curve", '{"kind": "majority", "n": 9}', "--points", "101")
    mus = [r["mu"] for r in data_of(out)["rows"]]
    assert len(mus) == 101 and all(b > a for a, b in zip(mus, mus[1:]))


def test_threshold(capsys):
    _, out, _ = run(capsys, "threshold", '{"kind": "dictator", "n": 1}', "--eps", "0.1")
    th = data_of(out)["threshold"]
    assert th["p_lo"] == pytest.approx(0.1, abs=1e-12) and th["p_hi"] == pytest.approx(0.9, abs=1e-12)
    assert data_of(out)["shapley_interval"]["vacuous"] is True


def test_threshold_majority_lengths(capsys):
    lengths = []
    for n in (5, 9):
        _, out, _ = run(capsys, "threshold", json.dumps({"kind": "majority", "n": n}), "--eps", str(1 / 3))
        lengths.append(data_of(out)["threshold"]["length"])
    assert lengths[1] < lengths[0]


def test_threshold_matches_library(capsys):
    from shapthresh import functions as fn
    from shapthresh.threshold import threshold_interval

    _, out, _ = run(capsys, "threshold", '{"kind": "tribes", "m": 3, "w": 3}', "--eps", "0.25")
    lib = json.loads(json.dumps(threshold_interval(fn.tribes(3, 3), 0.25).to_dict()))
    assert data_of(out)["threshold"] == lib


def test_threshold_domain_errors(capsys):
    assert run(capsys, "threshold", '{"kind": "parity", "n": 3}')[0] == 4
    assert run(capsys, "threshold", '{"kind": "constant", "n": 3, "value": 1}')[0] == 4


def test_spectrum(capsys):
    _, out, _ = run(capsys, "spectrum", '{"kind": "dictator", "n": 1}', "--p", "0.5")
    d = data_of(out)
    assert [(r["bitmask"], r["coefficient"]) for r in d["rows"]] == [(0, 0.5), (1, 0.5)]
    _, out, _ = run(capsys, "spectrum", '{"kind": "constant", "n": 3, "value": 1}', "--nonzero")
    assert [(r["bitmask"], r["coefficient"]) for r in data_of(out)["rows"]] == [(0, 1.0)]
    _, out, _ = run(capsys, "spectrum", AND2)
    d = data_of(out)
    assert [r["coefficient"] for r in d["rows"]] == pytest.approx([0.25] * 4, abs=1e-15)
    assert d["parseval_total"] == pytest.approx(0.25, abs=1e-15)


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "power", '{"kind": "nope", "n": 2}')[0] == 2
    assert run(capsys, "power", "{not json")[0] == 2
    assert run(capsys, "power", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "power", '{"kind": "and", "n": 23}')[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["power"])
    assert exc.value.code == 2


def test_spec_from_file_and_out(capsys, tmp_path):
    spec = tmp_path / "maj.json"
    spec.write_text(MAJ3)
    out = tmp_path / "out.csv"
    code, stdout, _ = run(capsys, "power", str(spec), "--format", "csv", "--out", str(out))
    assert code == 0 and stdout == ""
    assert out.read_text().startswith("player,value\n")
    manifest = json.loads((tmp_path / "out.csv.manifest.json").read_text())
    assert manifest["command"] == "power" and manifest["parameters"]["method"] == "exact"


def test_manifest_fields(capsys):
    _, out, _ = run(capsys, "power", MAJ3, "--method", "sampled", "--seed", "5", "--samples", "100")
    m = json.loads(out)["manifest"]
    assert set(m) == {"command", "parameters", "seed", "version", "duration_s"}
    assert m["seed"] == 5 and m["parameters"]["samples"] == 100


def test_verify_suite(capsys):
    code, out, err = run(capsys, "verify", "--suite", "mcgarvey")
    assert code == 0
    assert "64/64 tournaments realized (m=4)" in err
    assert data_of(out)["failed"] == 0


def test_verify_noise(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "noise", "--seed", "3")
    checks = {c["name"]: c for c in data_of(out)["checks"]}
    assert code == 0 and checks["direct_vs_spectral_max_dev"]["value"] <= 1e-10


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "shapthresh", "power", AND2], capture_output=True, text=True, check=True
    )
    assert json.loads(res.stdout)["data"]["total"] == pytest.approx(1.0)
