"""Command-line surface and the CSV/JSON plumbing underneath it."""

import csv
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from gtsou import (
    EQUITY_PARAMS,
    GtsParams,
    Marginal,
    ReturnSeries,
    SeriesKind,
    cumulants,
    emit_series,
    ingest,
    sample_marginal,
    stationary_moments,
)
from gtsou.cli import main


# --- ingest / emit ------------------------------------------------------------

def test_ingest_prices_to_log_returns(tmp_path):
    f = tmp_path / "prices.csv"
    f.write_text("100\n105\n")
    series = ingest(f, SeriesKind.PRICES)
    assert series.values == pytest.approx([100.0 * np.log(1.05)])
    assert series.values[0] == pytest.approx(4.879016416943205, rel=1e-12)


def test_ingest_flat_prices_zero_return(tmp_path):
    f = tmp_path / "prices.csv"
    f.write_text("100\n100\n")
    series = ingest(f, SeriesKind.PRICES)
    assert series.values == pytest.approx([0.0])


def test_ingest_returns_passthrough_with_header(tmp_path):
    f = tmp_path / "returns.csv"
    f.write_text("return\n0.5\n-1.25\n")
    series = ingest(f, SeriesKind.RETURNS)
    np.testing.assert_allclose(series.values, [0.5, -1.25])


def test_ingest_malformed_row_reports_line_number(tmp_path):
    f = tmp_path / "bad.csv"
    f.write_text("0.5\nnot-a-number\n0.7\n")
    with pytest.raises(ValueError, match="line 2"):
        ingest(f, SeriesKind.RETURNS)


def test_ingest_rejects_nonpositive_price(tmp_path):
    f = tmp_path / "bad.csv"
    f.write_text("100\n-5\n")
    with pytest.raises(ValueError, match="line 2"):
        ingest(f, SeriesKind.PRICES)


def test_ingest_rejects_multicolumn(tmp_path):
    f = tmp_path / "bad.csv"
    f.write_text("1.0,2.0\n")
    with pytest.raises(ValueError, match="one column"):
        ingest(f, SeriesKind.RETURNS)


def test_emit_ingest_round_trip(tmp_path):
    values = np.random.default_rng(1).standard_normal(257) * 3.71
    f = tmp_path / "series.csv"
    emit_series(f, ReturnSeries(values, source="synthetic"))
    back = ingest(f, SeriesKind.RETURNS)
    # values survive the text round trip to 15 significant digits
    np.testing.assert_allclose(back.values, values, rtol=5e-15, atol=0.0)


def test_ingest_emit_file_round_trip(tmp_path):
    # values carrying <= 15 significant digits survive ingest -> emit exactly:
    # the emitted file is a byte-for-byte fixed point of the round trip
    f1 = tmp_path / "in.csv"
    f2 = tmp_path / "out.csv"
    f3 = tmp_path / "again.csv"
    f1.write_text("return\n1.28211735256036\n-4.83471332925218\n0.5\n370\n")
    first = ingest(f1, SeriesKind.RETURNS)
    emit_series(f2, first)
    second = ingest(f2, SeriesKind.RETURNS)
    np.testing.assert_array_equal(second.values, first.values)
    emit_series(f3, second)
    assert f3.read_bytes() == f2.read_bytes()


def test_return_series_validation():
    with pytest.raises(ValueError):
        ReturnSeries(np.array([]), source="empty")
    with pytest.raises(ValueError):
        ReturnSeries(np.array([1.0, np.inf]), source="bad")


# --- params file format --------------------------------------------------------

def test_params_save_load_round_trip(tmp_path):
    f = tmp_path / "p.json"
    EQUITY_PARAMS.save(f)
    assert GtsParams.load(f) == EQUITY_PARAMS


def test_params_load_missing_field(tmp_path):
    f = tmp_path / "p.json"
    d = EQUITY_PARAMS.to_dict()
    del d["lambda_minus"]
    f.write_text(json.dumps(d))
    with pytest.raises(ValueError, match="lambda_minus"):
        GtsParams.load(f)


# --- subcommands ---------------------------------------------------------------

def run_cli(argv, tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("GTSOU_OUT_DIR", str(tmp_path))
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_moments_json_matches_library(tmp_path, monkeypatch, capsys):
    code, out, err = run_cli(["moments", "--params", "equity", "--out"],
                             tmp_path, monkeypatch, capsys)
    assert code == 0
    payload = json.loads((tmp_path / "moments.json").read_text())
    k = cumulants(EQUITY_PARAMS, 4)
    for i in range(1, 5):
        assert payload["cumulants"][f"kappa{i}"] == k[i]  # exact float round trip
    sm = stationary_moments(EQUITY_PARAMS, Marginal.SD)
    assert payload["sd"]["std_dev"] == sm.std_dev
    assert "gts:" in out and "sd:" in out


def test_moments_single_mode(tmp_path, monkeypatch, capsys):
    code, out, _ = run_cli(["moments", "--params", "crypto", "--mode", "gts"],
                           tmp_path, monkeypatch, capsys)
    assert code == 0
    assert "gts:" in out and "sd:" not in out


def test_moments_unknown_params(tmp_path, monkeypatch, capsys):
    code, out, err = run_cli(["moments", "--params", "nope"],
                             tmp_path, monkeypatch, capsys)
    assert code == 1
    assert "error:" in err


def test_density_writes_tables(tmp_path, monkeypatch, capsys):
    code, out, _ = run_cli(
        ["density", "--params", "equity", "--law", "gts", "--grid-n", "4096"],
        tmp_path, monkeypatch, capsys)
    assert code == 0
    with open(tmp_path / "density_gts.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x", "pdf", "cdf", "levy_density"]
    x = np.array([float(r[0]) for r in rows[1:]])
    pdf = np.array([float(r[1]) for r in rows[1:]])
    assert np.trapezoid(pdf, x) == pytest.approx(1.0, abs=1e-9)
    cdf_last = float(rows[-1][2])
    assert cdf_last == pytest.approx(1.0, abs=1e-12)
    exp_rows = list(csv.reader(open(tmp_path / "density_gts_exponent.csv")))
    assert exp_rows[0] == ["xi", "re_exponent", "im_exponent"]
    assert len(exp_rows) == 1002


def test_density_increment_law(tmp_path, monkeypatch, capsys):
    code, out, _ = run_cli(
        ["density", "--params", "equity", "--law", "increment", "--mode", "sd",
         "--ou-lambda", "0.5", "--dt", "1.0", "--grid-n", "4096"],
        tmp_path, monkeypatch, capsys)
    assert code == 0
    with open(tmp_path / "density_increment.csv") as fh:
        rows = list(csv.reader(fh))
    # no closed-form Levy density for the increment law: column stays blank
    assert {r[3] for r in rows[1:]} == {""}


def test_simulate_outputs_and_determinism(tmp_path, monkeypatch, capsys):
    argv = ["simulate", "--params", "equity", "--mode", "sd", "--ou-lambda", "0.3",
            "--n-steps", "300", "--n-paths", "2", "--seed", "11"]
    code, out, _ = run_cli(argv, tmp_path, monkeypatch, capsys)
    assert code == 0
    first = (tmp_path / "paths.csv").read_bytes()
    report = json.loads((tmp_path / "paths_report.json").read_text())
    assert report["n_observations"] == 2 * 301
    assert "indicator" in out and "paths ->" in out

    code, _, _ = run_cli(argv, tmp_path, monkeypatch, capsys)
    assert code == 0
    assert (tmp_path / "paths.csv").read_bytes() == first  # byte-identical rerun


def test_simulate_rejects_zero_paths(tmp_path, monkeypatch, capsys):
    code, _, err = run_cli(
        ["simulate", "--params", "equity", "--n-paths", "0", "--n-steps", "100"],
        tmp_path, monkeypatch, capsys)
    assert code == 1
    assert "error:" in err


def test_fit_writes_trace_and_params(tmp_path, monkeypatch, capsys):
    data = sample_marginal(EQUITY_PARAMS, Marginal.GTS, 400,
                           np.random.default_rng(23))
    csv_path = tmp_path / "returns.csv"
    emit_series(csv_path, ReturnSeries(data, source="synthetic"))

    # one iteration: exercises the full pipeline without a long optimization
    code, out, _ = run_cli(
        ["fit", str(csv_path), "--max-iter", "1", "--grad-tol", "1e-9"],
        tmp_path, monkeypatch, capsys)
    assert code == 1  # not converged in one step
    assert "converged=False" in out
    with open(tmp_path / "fit_trace.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][0] == "Iterations"
    assert rows[0][-2:] == ["||dLog(ML)/dV||", "Max Eigen Value"]
    assert len(rows) == 3  # header + iterations 0 and 1
    fitted = GtsParams.load(tmp_path / "fit_trace_params.json")
    fitted.validate()
    # the trace's last row equals the saved parameter vector
    np.testing.assert_allclose([float(v) for v in rows[-1][1:8]],
                               fitted.as_vector(), rtol=1e-12)


def test_validate_single_check(tmp_path, monkeypatch, capsys):
    code, out, _ = run_cli(["validate", "--ids", "C1", "--out"],
                           tmp_path, monkeypatch, capsys)
    assert code == 0
    assert "C1" in out and "PASS" in out
    payload = json.loads((tmp_path / "validation.json").read_text())
    assert payload["passed"] is True
    assert payload["results"][0]["check_id"] == "C1"


def test_validate_unknown_id(tmp_path, monkeypatch, capsys):
    code, _, err = run_cli(["validate", "--ids", "C99"],
                           tmp_path, monkeypatch, capsys)
    assert code == 1
    assert "unknown check ids" in err


def test_out_dir_absolute_path_wins(tmp_path, monkeypatch, capsys):
    target = tmp_path / "elsewhere" / "m.json"
    target.parent.mkdir()
    code, _, _ = run_cli(["moments", "--params", "equity", "--out", str(target)],
                         tmp_path, monkeypatch, capsys)
    assert code == 0
    assert target.exists()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gtsou", "moments",
                           "--params", "equity"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "gts:" in proc.stdout
