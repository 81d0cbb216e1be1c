import csv
import io
import json
import os
import subprocess
import sys

import pytest

from spectral_riesz import cli, spectra


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--model", "box", "--lengths", "1,1", "--lambda-max", "100", "--format", "csv")
    assert code == 0
    r = rows(out)
    assert r[0] == ["value", "multiplicity"]
    assert r[2] == ["49.348022005446794", "2"]


def test_spectrum_json_roundtrip(capsys, tmp_path):
    out_file = tmp_path / "osc.json"
    code, _, _ = run(capsys, "spectrum", "--model", "oscillator", "--dim", "2", "--lambda-max", "20", "--out", str(out_file))
    assert code == 0
    S = spectra.Spectrum.from_json(out_file.read_text())
    assert S.kind == spectra.OSCILLATOR and S.levels[1] == (4.0, 2)


def test_audit_default_suite_writes_files(capsys, tmp_path):
    code, out, _ = run(capsys, "audit", "--model", "disk", "--lambda-max", "300", "--out", str(tmp_path))
    assert code == 0
    table = rows(out)
    assert table[0] == ["family", "verdict", "worst_margin"]
    assert all(r[1] == "pass" for r in table[1:])
    names = sorted(os.listdir(tmp_path))
    assert len(names) == len(table) - 1 and names[0].startswith("00_")
    doc = json.loads((tmp_path / names[0]).read_text())
    assert doc["verdict"] == "pass" and len(doc["rows"]) == 200


def test_audit_melas_only_when_configured(capsys):
    _, out, _ = run(capsys, "audit", "--model", "box", "--lengths", "1,1", "--lambda-max", "500")
    assert "melas" not in out
    _, out, _ = run(capsys, "audit", "--model", "box", "--lengths", "1,1", "--lambda-max", "500", "--melas-constant", "0.0104")
    assert "upper:riesz:melas" in out


def test_audit_failure_exit_code(capsys, tmp_path):
    doc = {"dimension": 2, "levels": [[1.0, 1], [100.0, 1]], "completeness_ceiling": 100.0}
    f = tmp_path / "fake.json"
    f.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "audit", "--model", "explicit", "--spectrum-file", str(f), "--families", "yang", "--grid", "2:50:20")
    assert code == 1 and "fail" in out
    code, out, _ = run(capsys, "gamma", "--model", "explicit", "--spectrum-file", str(f), "--m", "1", "--rho", "2")
    assert code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["audit", "--model", "box", "--lambda-max", "100"],
        ["audit", "--model", "box", "--lengths", "1,x", "--lambda-max", "100"],
        ["audit", "--model", "box", "--lengths", "1,1", "--lambda-max", "100", "--grid", "1:2"],
        ["audit", "--model", "box", "--lengths", "1,1", "--lambda-max", "100", "--families", "nope"],
        ["audit", "--model", "box", "--lengths", "1,1", "--lambda-max", "100", "--families", "upper:riesz:melas:1"],
        ["spectrum", "--model", "explicit"],
    ],
)
def test_configuration_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_numerical_errors_exit_3(capsys):
    code, _, err = run(capsys, "audit", "--model", "box", "--lengths", "1,1", "--lambda-max", "100", "--grid", "1:500:10")
    assert code == 3 and "ceiling" in err
    code, _, _ = run(capsys, "audit", "--model", "box", "--lengths", "1,1", "--lambda-max", "100", "--families", "heat_scaled", "--tgrid", "1e-6:1:10:log")
    assert code == 3


def test_config_file_and_precedence(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"model": "box", "lengths": "1,1", "lambda_max": 100, "format": "csv"}))
    code, out, _ = run(capsys, "spectrum", "--config", str(cfg))
    assert code == 0 and rows(out)[0] == ["value", "multiplicity"]
    code, out, _ = run(capsys, "spectrum", "--config", str(cfg), "--format", "json")
    assert json.loads(out)["dimension"] == 2
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "spectrum", "--config", str(cfg))[0] == 2


def test_figure_output(capsys):
    code, out, _ = run(capsys, "figure", "--id", "fig1", "--grid", "0:1:3")
    r = rows(out)
    assert code == 0 and r[0][0] == "rho" and len(r) == 4
    assert float(r[1][4]) == pytest.approx((5 / 3) ** 1.5, rel=1e-12)
    code, out, _ = run(capsys, "figure", "--id", "fig2")
    assert code == 0 and len(rows(out)) == 101


def test_conjecture_command(capsys):
    code, out, _ = run(capsys, "conjecture", "--target", "eq_4_8", "--rho", "3", "--aspects", "1,2", "--no-disk")
    r = rows(out)
    assert code == 0
    assert r[1][1] == "conjecture-consistent"
    assert float(r[1][3]) == pytest.approx(1.530714696942357, abs=1e-8)


def test_gamma_command(capsys):
    code, out, _ = run(capsys, "gamma", "--model", "box", "--lengths", "1,1", "--lambda-max", "2000", "--m", "1-3", "--rho", "2,3")
    r = rows(out)
    assert code == 0 and len(r) == 7
    assert r[0] == ["m", "rho", "gamma", "next_eigenvalue", "slack"]
    assert [x[0] for x in r[1:]] == ["1", "1", "2", "2", "3", "3"]


def test_threads_do_not_change_output(capsys, monkeypatch):
    argv = ["audit", "--model", "box", "--lengths", "1,2", "--lambda-max", "1500"]
    _, serial, _ = run(capsys, *argv)
    monkeypatch.setenv("SPECTRAL_RIESZ_THREADS", "4")
    _, parallel, _ = run(capsys, *argv)
    assert serial == parallel
    monkeypatch.setenv("SPECTRAL_RIESZ_THREADS", "many")
    assert run(capsys, *argv)[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "spectral_riesz", "figure", "--id", "fig2", "--grid", "2:3:2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("rho,conjecture")


def test_spectrum_examples(capsys):
    _, out, _ = run(capsys, "spectrum", "--model", "box", "--lengths", "1,1", "--lambda-max", "100", "--format", "csv")
    r = rows(out)
    assert len(r) == 5 and float(r[3][0]) == pytest.approx(8 * 3.141592653589793**2) and r[3][1] == "1"
    _, out, _ = run(capsys, "spectrum", "--model", "interval", "--length", "3.14159265358979", "--lambda-max", "10.5", "--format", "csv")
    assert len(rows(out)) == 4


def test_audit_precondition_exit_codes(capsys):
    code, _, err = run(capsys, "audit", "--model", "box", "--lengths", "1,1", "--lambda-max", "100", "--families", "schrodinger_hs:2")
    assert code == 2 and "kinetic" in err
    code, _, err = run(capsys, "audit", "--model", "disk", "--lambda-max", "50", "--grid", "1:200:20")
    assert code == 3 and "ceiling" in err
    code, _, _ = run(capsys, "audit", "--model", "box", "--lengths", "1,1", "--lambda-max", "4000")
    assert code == 0
