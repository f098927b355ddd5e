import json
import os

import pytest

from bsc.cli import CSV_HEADER, main


def run_cli(args, tmp_path, name):
    out = tmp_path / name
    code = main(args + ["--out", str(out)])
    return code, out.read_bytes() if out.exists() else b""


def test_constants_json(tmp_path):
    code, raw = run_cli(["constants", "--n", "5", "--p", "2"], tmp_path, "c.json")
    assert code == 0
    doc = json.loads(raw)
    assert doc["command"] == "constants"
    for key in ("S", "E", "T_E", "T_0", "iso_B", "iso_B_root"):
        assert key in doc["constants"]
    assert doc["tolerances"]["rel_tol"] == 1e-9
    assert abs(doc["diagnostics"]["phi_at_T0"] - doc["diagnostics"]["predicted_phi_at_T0"]) < 1e-5


def test_curve_phih_csv_schema(tmp_path):
    code, raw = run_cli(
        ["curve", "phih", "--n", "5", "--p", "2", "--t-min", "0.02", "--t-max", "5",
         "--samples", "16", "--scale", "log"],
        tmp_path, "curve.csv",
    )
    assert code == 0
    lines = raw.decode().strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 17
    ts = []
    for line in lines[1:]:
        cells = line.split(",")
        assert len(cells) == 7
        ts.append(float(cells[0]))
        # 17 significant digits round-trip exactly
        assert float(cells[1]) == float(f"{float(cells[1]):.17g}")
        assert cells[2] in ("sobolev", "escobar", "beyond")
    assert ts == sorted(ts)


def test_curve_phib_csv(tmp_path):
    code, raw = run_cli(
        ["curve", "phib", "--n", "4", "--p", "2", "--t-min", "0.2", "--t-max", "1.7",
         "--samples", "5", "--scale", "linear"],
        tmp_path, "ball.csv",
    )
    assert code == 0
    lines = raw.decode().strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 6


def test_verify_key_exit_zero(tmp_path):
    code, raw = run_cli(
        ["verify", "key", "--n", "5", "--p", "2", "--samples", "6"],
        tmp_path, "key.json",
    )
    assert code == 0
    doc = json.loads(raw)
    assert doc["pass"] is True
    assert "tolerances" in doc


def test_verify_compare_and_interp(tmp_path):
    code, raw = run_cli(
        ["verify", "compare", "--n", "5", "--p", "2", "--samples", "6"],
        tmp_path, "cmp.json",
    )
    assert code == 0 and json.loads(raw)["pass"] is True
    code, raw = run_cli(
        ["verify", "interp", "--n", "5", "--p", "2", "--samples", "5"],
        tmp_path, "interp.json",
    )
    assert code == 0 and json.loads(raw)["pass"] is True


def test_verify_expansion(tmp_path):
    code, raw = run_cli(
        ["verify", "expansion", "--n", "5", "--p", "2",
         "--eps", "1e-2", "3e-3", "1e-3"],
        tmp_path, "exp.json",
    )
    assert code == 0
    doc = json.loads(raw)
    assert doc["pass"] is True
    assert doc["beta"] == 0.5


def test_validation_exit_code(tmp_path):
    code = main(["constants", "--n", "2", "--p", "2"])
    assert code == 3
    code = main(["curve", "phih", "--n", "5", "--p", "2", "--t-min", "5",
                 "--t-max", "2", "--samples", "4"])
    assert code == 3


def test_usage_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_missing_required_pair():
    assert main(["constants"]) == 3


def test_config_file_merge(tmp_path):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"n": 5, "p": 2.0, "samples": 4, "t_min": 1.0,
                                   "t_max": 3.0}))
    out = tmp_path / "a.csv"
    code = main(["curve", "phih", "--config", str(cfgfile), "--out", str(out)])
    assert code == 0
    assert len(out.read_text().strip().split("\n")) == 5
    # flags override the file
    out2 = tmp_path / "b.csv"
    code = main(["curve", "phih", "--config", str(cfgfile), "--samples", "6",
                 "--out", str(out2)])
    assert code == 0
    assert len(out2.read_text().strip().split("\n")) == 7


def test_bsc_threads_validation(tmp_path, monkeypatch):
    monkeypatch.setenv("BSC_THREADS", "zero")
    assert main(["curve", "phih", "--n", "5", "--p", "2", "--samples", "4",
                 "--t-min", "1.0", "--t-max", "2.0"]) == 3
    monkeypatch.setenv("BSC_THREADS", "0")
    assert main(["curve", "phih", "--n", "5", "--p", "2", "--samples", "4",
                 "--t-min", "1.0", "--t-max", "2.0"]) == 3


def test_worker_fanout_matches_serial(tmp_path, monkeypatch):
    args = ["curve", "phih", "--n", "4", "--p", "2", "--samples", "4",
            "--t-min", "1.0", "--t-max", "2.0"]
    monkeypatch.setenv("BSC_THREADS", "1")
    code, serial = run_cli(args, tmp_path, "serial.csv")
    assert code == 0
    monkeypatch.setenv("BSC_THREADS", "2")
    code, fanned = run_cli(args, tmp_path, "fanned.csv")
    assert code == 0
    assert serial == fanned


def test_byte_identical_reruns(tmp_path):
    args = ["constants", "--n", "3", "--p", "1.5"]
    _, a = run_cli(args, tmp_path, "a.json")
    _, b = run_cli(args, tmp_path, "b.json")
    assert a == b
    args = ["curve", "phih", "--n", "3", "--p", "1.5", "--samples", "6",
            "--t-min", "0.5", "--t-max", "4.0"]
    _, a = run_cli(args, tmp_path, "a.csv")
    _, b = run_cli(args, tmp_path, "b.csv")
    assert a == b
