import json
import subprocess
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qcorr.cli import main
from qcorr.states import werner_complement
from qcorr.sweep import from_csv

ORACLE_ARGS = ["--measures", "fef_numeric", "--restarts", "2", "--max-iters", "3"]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sweep_stdout(capsys):
    code, out, _ = run(["sweep", "--family", "werner-complement", "--d", "2", "--steps", "5"], capsys)
    assert code == 0
    points, measures = from_csv(out)
    assert measures == ("fef_closed", "discord_closed")
    assert [p.param for p in points] == [-1, -0.5, 0, 0.5, 1]
    assert points[3].values["fef_closed"] == pytest.approx(1)


def test_sweep_out_file_and_range(tmp_path, capsys):
    out = tmp_path / "iso.csv"
    argv = ["sweep", "--family", "isotropic-complement", "--d", "3", "--from", "0.2", "--to", "0.6",
            "--steps", "3", "--measures", "eof,fef_lower_bound", "--out", str(out)]
    code, stdout, _ = run(argv, capsys)
    assert code == 0 and stdout == ""
    points, measures = from_csv(out.read_text())
    assert measures == ("fef_lower_bound", "eof")
    assert [p.param for p in points] == [0.2, 0.4, 0.6]


def test_sweep_byte_identical(capsys):
    argv = ["sweep", "--family", "werner-complement", "--d", "2", "--steps", "4", "--seed", "9", *ORACLE_ARGS]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv + ["--workers", "2"], capsys)
    assert a == b


def test_seed_flag_beats_env(monkeypatch, capsys):
    base = ["sweep", "--family", "werner-complement", "--d", "2", "--steps", "3", *ORACLE_ARGS]
    _, seed5, _ = run(base + ["--seed", "5"], capsys)
    _, seed6, _ = run(base + ["--seed", "6"], capsys)
    assert seed5 != seed6
    monkeypatch.setenv("QCORR_SEED", "6")
    _, env_only, _ = run(base, capsys)
    _, both, _ = run(base + ["--seed", "5"], capsys)
    assert env_only == seed6
    assert both == seed5


def test_bad_env_seed(monkeypatch, capsys):
    monkeypatch.setenv("QCORR_SEED", "abc")
    code, _, err = run(["sweep", "--family", "werner-complement", "--d", "2", "--steps", "3"], capsys)
    assert code == 2 and "QCORR_SEED" in err


def test_config_error_exit_code(capsys):
    code, _, err = run(["sweep", "--family", "werner-complement", "--d", "2", "--from", "-3"], capsys)
    assert code == 2 and "domain" in err


def test_capability_error_exit_code(capsys):
    argv = ["sweep", "--family", "werner-complement", "--d", "4", "--steps", "2", *ORACLE_ARGS]
    code, _, err = run(argv, capsys)
    assert code == 2 and "fef_numeric" in err


def test_unknown_family():
    with pytest.raises(SystemExit):
        main(["sweep", "--family", "bell", "--d", "2"])


def test_verify_empty(capsys):
    code, out, _ = run(["verify", "--d", ""], capsys)
    assert code == 0
    assert json.loads(out) == []


def test_verify_d3(tmp_path, capsys):
    out = tmp_path / "v.json"
    code, _, _ = run(["verify", "--d", "3", "--out", str(out)], capsys)
    assert code == 0
    records = json.loads(out.read_text())
    assert any(r["status"] == "documented-discrepancy" for r in records if "status" in r)


def test_fixture(capsys):
    code, out, _ = run(["fixture", "--x", "0.5"], capsys)
    assert code == 0
    rows = [r for r in out.replace("[", " ").replace("]", " ").split("\n") if r.strip()]
    m = np.array([[float(v) for v in r.split()] for r in rows])
    assert m.shape == (8, 8)
    assert_allclose(m, werner_complement(2, 0.5).matrix.real, atol=1e-6)


def test_inflect(tmp_path, capsys):
    csv_path = tmp_path / "w.csv"
    run(["sweep", "--family", "werner-complement", "--d", "2", "--steps", "801", "--measures", "discord_closed",
         "--out", str(csv_path)], capsys)
    code, out, _ = run(["inflect", str(csv_path)], capsys)
    assert code == 0
    rep = json.loads(out)
    assert len(rep["locations"]) >= 2
    assert min(abs(t) for t in rep["locations"]) <= rep["step"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qcorr", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    for cmd in ("sweep", "verify", "fixture", "inflect"):
        assert cmd in res.stdout
