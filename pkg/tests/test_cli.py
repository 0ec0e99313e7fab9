import json

import pytest

from multiclaw.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_bounds_plain_and_json(capsys):
    code, out = run_cli(capsys, "bounds", "mtqs", "1000", "50")
    assert code == 0 and out.out.strip() == "90.0"
    code, out = run_cli(capsys, "bounds", "qlimit", "2", "2", "512", "1", "--json")
    assert json.loads(out.out)["value"] == 5408
    code, out = run_cli(capsys, "bounds", "exponent", "4", "mclaw")
    assert out.out.strip() == "7/15"


def test_bounds_precondition_is_an_error(capsys):
    code, out = run_cli(capsys, "bounds", "bbht", "100", "25")
    assert code == 2 and "17/81" in out.err


def test_run_and_fit(tmp_path, capsys):
    csv_path = tmp_path / "out.csv"
    code, _ = run_cli(capsys, "run", "--algorithm", "bht", "--ell", "2", "--log-n-min", "8",
                      "--log-n-max", "12", "--trials", "30", "--seed", "1", "--out", str(csv_path))
    assert code == 0
    summary = json.loads((tmp_path / "out.summary.json").read_text())
    assert summary["trials"] == 90 and summary["fit"] is not None
    code, out = run_cli(capsys, "fit", str(csv_path))
    assert json.loads(out.out)["measured_slope"] == pytest.approx(summary["measured_slope"])


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("algorithm: recmcoll\nell: 3\nlog_n: [6, 8, 10]\ntrials: 50\n")
    code, out = run_cli(capsys, "run", "--config", str(cfg), "--trials", "3", "--format", "json")
    assert code == 0
    data = json.loads(out.out)
    assert data["config"]["algorithm"] == "recmcoll"
    assert len(data["records"]) == 9


def test_json_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"algorithm": "multigrover", "ell": 2, "n_values": [64, 256, 1024]}))
    code, out = run_cli(capsys, "run", "--config", str(cfg), "--trials", "2", "--format", "json")
    assert code == 0 and len(json.loads(out.out)["records"]) == 6


def test_statevector_guard(capsys):
    code, out = run_cli(capsys, "run", "--backend", "statevector", "--log-n-max", "22", "--trials", "1")
    assert code == 2 and "statevector" in out.err


def test_accept_exit_codes(capsys):
    code, out = run_cli(capsys, "accept", "--only", "C13,C10", "--quick")
    assert code == 0 and out.out.count("[PASS]") == 2
