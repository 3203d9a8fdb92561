import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from lassopred import Geometry, L1, RegularizerSpec, dc_closed_l1, tune
from lassopred.cli import main


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    assert rows, "expected at least one data row"
    return rows


def test_tune_json_keys(capsys):
    code, out, _ = run_cli(["tune", "--n", "1000", "--m", "500", "--k", "100"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"lambda_best", "tau_best", "eta_min"}
    assert doc["eta_min"] > 0
    spec = RegularizerSpec(kind=L1, n=1000, support=tuple(range(100)), signs=np.ones(100))
    lam_best, tau_best, eta_min = tune(Geometry(spec=spec, m=500))
    assert doc["lambda_best"] == lam_best
    assert doc["tau_best"] == tau_best
    assert doc["eta_min"] == eta_min


def test_dist_tau_zero_row(capsys):
    code, out, _ = run_cli(["dist", "--n", "100", "--k", "10", "--tau", "0"], capsys)
    assert code == 0
    rows = parse_csv(out)
    assert float(rows[0]["D"]) == 100.0
    assert float(rows[0]["C"]) == 0.0
    assert rows[0]["source"] == "closed_form"


def test_dist_monte_carlo_deterministic(capsys):
    args = ["dist", "--n", "40", "--k", "5", "--tau", "1.0", "--mc",
            "--samples", "2000", "--seed", "9"]
    code1, out1, _ = run_cli(args, capsys)
    code2, out2, _ = run_cli(args, capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    assert parse_csv(out1)[0]["source"] == "monte_carlo"
    code3, out3, _ = run_cli(args[:-1] + ["10"], capsys)
    assert out3 != out1


def test_phase_below_transition_exits_one(capsys):
    # oracle check first: the minimal distance for this structure exceeds m
    taus = np.arange(1e-3, 6.0, 1e-3)
    d_star_grid = min(dc_closed_l1(1000, 100, t).D for t in taus)
    assert d_star_grid > 100

    code, out, err = run_cli(["phase", "--n", "1000", "--m", "100", "--k", "100"], capsys)
    assert code == 1
    assert "phase transition" in err
    doc = json.loads(out)
    assert doc["robust"] is False
    assert doc["minimax_nse"] is None
    assert doc["d_star"] == pytest.approx(d_star_grid, rel=1e-4)


def test_phase_robust_exits_zero(capsys):
    code, out, _ = run_cli(["phase", "--n", "100", "--m", "60", "--k", "10"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["robust"] is True
    assert doc["minimax_nse"] > 0


def test_map_csv_schema(capsys):
    code, out, _ = run_cli(
        ["map", "--n", "100", "--m", "60", "--k", "10", "--points", "20"], capsys
    )
    assert code == 0
    rows = parse_csv(out)
    assert list(rows[0]) == ["tau", "map", "D", "C", "tau_lo", "tau_hi"]
    maps = [float(r["map"]) for r in rows]
    assert all(a < b for a, b in zip(maps, maps[1:]))
    lo, hi = float(rows[0]["tau_lo"]), float(rows[0]["tau_hi"])
    taus = [float(r["tau"]) for r in rows]
    assert all(lo < t < hi for t in taus)


def test_predict_csv_and_json(capsys):
    args = ["predict", "--n", "100", "--m", "60", "--k", "10", "--lam-points", "9"]
    code, out, _ = run_cli(args, capsys)
    assert code == 0
    rows = parse_csv(out)
    assert list(rows[0]) == ["lambda", "tau", "eta", "low_confidence"]
    etas = [float(r["eta"]) for r in rows]
    assert min(etas) == etas[4]  # grid centered on lambda_best
    code, out, _ = run_cli(args + ["--format", "json"], capsys)
    docs = json.loads(out)
    assert len(docs) == 9 and docs[0]["eta"] > 0


def test_gordon_deltas_small(capsys):
    code, out, _ = run_cli(
        ["gordon", "--n", "100", "--m", "60", "--k", "10", "--lam", "5.0"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    assert abs(doc["delta_alpha"]) <= 1e-5
    assert abs(doc["delta_beta"]) <= 1e-5
    assert abs(doc["delta_objective"]) <= 1e-8
    assert doc["closed_form"]["alpha_star"] > 0
    assert doc["nested_search"]["beta_star"] > 0


def test_spec_file_flag(tmp_path, capsys):
    spec = RegularizerSpec(kind=L1, n=100, support=(1, 5, 7), signs=np.array([1.0, -1.0, 1.0]))
    path = tmp_path / "spec.json"
    path.write_text(spec.to_json())
    code, out, _ = run_cli(["tune", "--spec", str(path), "--m", "60"], capsys)
    assert code == 0
    doc = json.loads(out)
    spec_direct = RegularizerSpec(kind=L1, n=100, support=(0, 1, 2), signs=np.ones(3))
    lam_best = tune(Geometry(spec=spec_direct, m=60))[0]
    assert doc["lambda_best"] == pytest.approx(lam_best, rel=1e-12)  # position invariant


def test_validate_end_to_end(tmp_path, capsys):
    spec = RegularizerSpec(kind=L1, n=64, support=(0, 16, 32, 48),
                           signs=np.array([1.0, -1.0, 1.0, -1.0]))
    config = {
        "spec": spec.to_json_dict(),
        "m": 32,
        "sigma_grid": [1e-3],
        "lambda_grid": [5.0],
        "trials": 2,
        "master_seed": 11,
    }
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(config))
    out_path = tmp_path / "out.csv"
    side_path = tmp_path / "side.json"
    code, _, _ = run_cli(
        ["validate", "--config", str(cfg_path), "--out", str(out_path),
         "--sidecar", str(side_path)], capsys
    )
    assert code == 0
    rows = parse_csv(out_path.read_text())
    assert rows[0]["sigma"] == "0.001"
    assert int(rows[0]["n_converged"]) == 2
    assert math.isfinite(float(rows[0]["mean_nse"]))
    side = json.loads(side_path.read_text())
    assert side["config"]["trials"] == 2


def test_out_flag_writes_file(tmp_path, capsys):
    path = tmp_path / "tune.json"
    code, out, _ = run_cli(
        ["tune", "--n", "100", "--m", "60", "--k", "10", "--out", str(path)], capsys
    )
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["eta_min"] > 0


def test_missing_structure_flags_is_usage_error(capsys):
    code, _, err = run_cli(["tune", "--m", "60"], capsys)
    assert code == 2
    assert "usage error" in err


def test_unknown_flag_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["tune", "--n", "10", "--m", "6", "--k", "2", "--bogus"])
    assert exc.value.code == 2


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "lassopred.cli", "tune", "--n", "100", "--m", "60", "--k", "10"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["lambda_best"] > 0
