import csv
import io
import json

import pytest

from bcrb_rmt.cli import COMPARE_COLUMNS, MC_COLUMNS, SWEEP_COLUMNS, main, parse_nu


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_parse_nu():
    assert parse_nu("inf") == float("inf")
    assert parse_nu("6") == 6.0


def test_sweep_defaults(capsys):
    code, out, _ = run(["sweep", "--seeds", "10"], capsys)
    assert code == 0
    rows = read_csv(out)
    assert list(rows[0]) == list(SWEEP_COLUMNS)
    assert len(rows) == 81
    zero = next(r for r in rows if float(r["snr_db"]) == 0.0)
    assert abs(float(zero["bcrb_asymptotic"]) - 0.414562) < 1e-5
    assert rows[0]["small_r_valid"] == "true"
    assert zero["small_r_valid"] == "false"


def test_csv_number_format(capsys):
    _, out, _ = run(["compare", "--snr-db", "0:0:1"], capsys)
    line = out.splitlines()[1]
    assert line.split(",")[3] == "0.414562021106"  # 12 significant digits


def test_sweep_rejects_nu_two(capsys):
    code, _, err = run(["sweep", "--nu", "2"], capsys)
    assert code == 2
    assert "nu" in err


def test_sweep_accepts_nu_four(capsys):
    code, _, _ = run(["sweep", "--nu", "4", "--seeds", "2", "--snr-db", "0:1:1"], capsys)
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["sweep", "--snr-db", "5:0:1"],
    ["sweep", "--snr-db", "0:5:0"],
    ["sweep", "--seeds", "0"],
    ["sweep", "--k", "100"],
    ["sweep", "--sigma2", "1.0"],
    ["compare", "--nu1", "1.5"],
])
def test_bad_arguments_exit_2(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_mutually_exclusive_noise_scale(capsys):
    with pytest.raises(SystemExit) as info:
        main(["mc", "--sigma2", "1", "--sigma-e2", "1"])
    assert info.value.code == 2


def test_io_failure(tmp_path, capsys):
    code, _, err = run(["compare", "--out", str(tmp_path / "missing" / "x.csv")], capsys)
    assert code == 1
    assert "cannot write" in err


def test_compare_defaults(capsys):
    code, out, _ = run(["compare"], capsys)
    rows = read_csv(out)
    assert code == 0 and list(rows[0]) == list(COMPARE_COLUMNS)
    for r in rows:
        if float(r["snr_db"]) > -10:
            assert float(r["bcrb0"]) < float(r["bcrb1"])


def test_compare_inf_sentinel(capsys):
    _, out, _ = run(["compare", "--nu1", "inf", "--format", "json"], capsys)
    doc = json.loads(out)
    assert doc["meta"]["nu1"] == "inf"
    assert all(r["bcrb1"] == r["bcrb1_inf"] for r in doc["rows"])


def test_mc_grid(capsys):
    code, out, _ = run(["mc", "--trials", "200", "--nu-list", "6", "inf"], capsys)
    rows = read_csv(out)
    assert code == 0 and list(rows[0]) == list(MC_COLUMNS)
    assert len(rows) == 8
    assert {r["nu"] for r in rows} == {"6", "inf"}


def test_mc_single_point(capsys):
    code, out, _ = run(["mc", "--trials", "1", "--sigma-e2", "1.0"], capsys)
    rows = read_csv(out)
    assert code == 0 and len(rows) == 1
    assert rows[0]["std_err"] == ""
    assert abs(float(rows[0]["snr_db"])) < 1e-12


def test_threads_do_not_change_output(capsys, monkeypatch):
    _, one, _ = run(["sweep", "--seeds", "16", "--threads", "1"], capsys)
    monkeypatch.setenv("BCRB_RMT_THREADS", "4")
    _, four, _ = run(["sweep", "--seeds", "16"], capsys)
    assert one == four


def test_bad_thread_env(capsys, monkeypatch):
    monkeypatch.setenv("BCRB_RMT_THREADS", "zero")
    assert run(["compare"], capsys)[0] == 2


def test_validate_spectral_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    code, _, _ = run(["validate", "--suite", "spectral", "--out", str(out)], capsys)
    doc = json.loads(out.read_text())
    assert code == 0
    assert doc["suite"] == "spectral" and doc["seed"] == 1
    names = {c["name"] for c in doc["checks"]}
    assert "trace_inverse_gaussian" in names
    for c in doc["checks"]:
        assert set(c) >= {"name", "value", "target", "tol", "pass"}
        assert c["pass"] is True


def test_validate_distributions(capsys):
    code, out, _ = run(["validate", "--suite", "distributions"], capsys)
    doc = json.loads(out)
    assert code == 0
    check = next(c for c in doc["checks"] if c["name"] == "inv_gamma_sq_mean_nu6")
    assert check["target"] == 4.5 and check["pass"]


def test_validate_forced_failure(capsys):
    code, out, _ = run(["validate", "--suite", "bounds", "--tol-scale", "0"], capsys)
    assert code == 1
    assert any(not c["pass"] for c in json.loads(out)["checks"])


def test_validate_bounds_passes(capsys):
    assert run(["validate", "--suite", "bounds"], capsys)[0] == 0


def test_synth(tmp_path, capsys):
    code, out, _ = run(["synth", "--n", "20", "--k", "4", "--out", str(tmp_path / "ds")], capsys)
    assert code == 0
    assert len(out.splitlines()) == 5
    header = (tmp_path / "ds" / "design.csv").read_text().splitlines()
    assert header[0] == "a0,a1,a2,a3" and len(header) == 21
