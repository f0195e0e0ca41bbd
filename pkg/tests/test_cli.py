import csv
import json

import pytest

from qcaclock.cli import main


def _read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_device_json(capsys):
    assert main(["device", "--device", "Maj-101"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["name"] == "Maj-101"
    assert payload["n_cells"] == 5
    assert payload["outputs"] == [4]


def test_unknown_device_errors():
    from qcaclock.network import NetworkError

    with pytest.raises(NetworkError):
        main(["device", "--device", "Flip-Flop"])


def test_spectrum_csv_and_plot(tmp_path):
    out = tmp_path / "spec.csv"
    assert main(["spectrum", "--device", "Wire-3", "--grid", "81",
                 "--out", str(out), "--plot"]) == 0
    rows = _read_csv(out)
    assert rows[0][0] == "s"
    assert len(rows) == 82
    # full-precision scientific notation
    assert "e" in rows[1][1]
    assert (tmp_path / "spec.png").exists()


def test_evolve_dense_csv(tmp_path, capsys):
    out = tmp_path / "run.csv"
    assert main(["evolve", "--device", "Wire-3", "--runrate", "5e-2",
                 "--out", str(out)]) == 0
    rows = _read_csv(out)
    assert rows[0][:2] == ["s", "q_adiabatic"]
    assert len(rows) == 502
    err = capsys.readouterr().err
    assert "q_classical" in err


def test_evolve_icha_json(tmp_path):
    out = tmp_path / "run.json"
    assert main(["evolve", "--device", "Wire-3", "--runrate", "2e-2",
                 "--engine", "icha", "--format", "json",
                 "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["engine"] == "icha"
    assert 0.0 <= payload["q_logical"] <= 1.0
    assert payload["oscillation_frequency"] > 0


def test_analyze_csv(capsys):
    assert main(["analyze", "--device", "Wire-5"]) == 0
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    table = dict(rows[1:])
    assert float(table["F0"]) == pytest.approx(0.5)
    assert float(table["beta_star_estimate"]) == pytest.approx(6.21, abs=0.05)


def test_sweep_freq_cli(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep-freq", "--device", "Wire-3", "--engine", "icha",
                 "--rate-min", "2e-2", "--rate-max", "0.2", "--points", "4",
                 "--threads", "1", "--out", str(out), "--plot"]) == 0
    rows = _read_csv(out)
    assert rows[0] == ["runrate", "q_logical"]
    assert len(rows) == 5
    assert (tmp_path / "sweep.png").exists()


def test_config_defaults(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"device": "Wire-3"}))
    assert main(["--config", str(cfg), "device"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["name"] == "Wire-3"
