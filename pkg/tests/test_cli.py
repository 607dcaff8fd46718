import json
import subprocess
import sys

import pytest

from duplexqkd.cli import main
from duplexqkd.duplex import example_transcript_path

from conftest import (
    EXPECTED_DISCARD,
    EXPECTED_KEY,
    EXPECTED_SET2,
    EXPECTED_SET3,
    EXPECTED_TRIPLES,
)


def run_cli(*argv) -> int:
    return main(list(argv))


def test_run_noiseless_duplex_session(tmp_path, capsys):
    out = tmp_path / "out"
    code = run_cli(
        "run", "--protocol", "duplex", "--timeslots", "200",
        "--sessions", "1", "--seed", "5", "--out", str(out),
    )
    assert code == 0
    payload = json.loads((out / "report.json").read_text())
    (session,) = payload["sessions"]
    assert session["failures"] == 0
    assert session["keys_agree"] is True
    assert payload["aggregate"]["detection_rate"] == 0.0
    assert "detection_rate=0.0" in capsys.readouterr().out


def test_run_writes_csv_table(tmp_path):
    out = tmp_path / "out"
    assert run_cli("run", "--timeslots", "100", "--sessions", "3", "--out", str(out)) == 0
    lines = (out / "sessions.csv").read_text().splitlines()
    assert lines[0].startswith("session_index,protocol")
    assert len(lines) == 4


def test_run_rejects_invalid_config():
    assert run_cli("run", "--timeslots", "0") == 2


def test_bb84_full_interception_aggregate_error_rate(tmp_path):
    out = tmp_path / "out"
    code = run_cli(
        "run", "--protocol", "bb84", "--timeslots", "60", "--intercept", "1",
        "--sessions", "10000", "--seed", "11", "--out", str(out),
    )
    assert code == 0
    payload = json.loads((out / "report.json").read_text())
    assert abs(payload["aggregate"]["mean_error_rate"] - 0.25) <= 0.015


def test_duplex_detection_rate_with_ten_pairs(tmp_path):
    out = tmp_path / "out"
    code = run_cli(
        "run", "--protocol", "duplex", "--timeslots", "120", "--intercept", "1",
        "--max-pairs", "10", "--sessions", "2000", "--seed", "13", "--out", str(out),
    )
    assert code == 0
    payload = json.loads((out / "report.json").read_text())
    expected = 1 - 0.625**10
    assert abs(payload["aggregate"]["detection_rate"] - expected) <= 0.01


def test_replay_worked_example(tmp_path, capsys):
    json_path = tmp_path / "replay.json"
    code = run_cli("replay", str(example_transcript_path()), "--json", str(json_path))
    assert code == 0
    text = capsys.readouterr().out
    assert "discard: 1 4 7 12 13 19 20" in text
    assert "(3,2,1) (6,5,0) (9,8,0) (11,10,0) (15,14,1) (17,16,1)" in text
    assert "verification: 6 checked, 0 failed -> PASS" in text

    payload = json.loads(json_path.read_text())
    assert payload["discard"] == sorted(EXPECTED_DISCARD)
    assert payload["set2"] == list(EXPECTED_SET2)
    assert payload["set3"] == list(EXPECTED_SET3)
    assert payload["triples"] == [list(t) for t in EXPECTED_TRIPLES]
    assert payload["alice_key"] == EXPECTED_KEY
    assert payload["alice_key"][0] == 1
    assert payload["keys_agree"] is True


def test_replay_flags_an_injected_error(tmp_path, capsys):
    # Corrupt what Alice measured in timeslot 2.
    lines = example_transcript_path().read_text().splitlines()
    patched = [
        "2 B>A X 0 X 1" if line.startswith("2 ") else line for line in lines
    ]
    path = tmp_path / "corrupted.transcript"
    path.write_text("\n".join(patched) + "\n")
    json_path = tmp_path / "replay.json"
    assert run_cli("replay", str(path), "--json", str(json_path)) == 0
    payload = json.loads(json_path.read_text())
    assert payload["failures"] == [[3, 2, 1]]
    assert payload["passed"] is False
    assert "FAIL" in capsys.readouterr().out


def test_replay_malformed_row_names_the_line(tmp_path, capsys):
    path = tmp_path / "bad.transcript"
    path.write_text("1 A>B X 1 X 1\n2 B>A X nope X 1\n")
    assert run_cli("replay", str(path)) == 1
    assert "line 2" in capsys.readouterr().err


def test_replay_empty_file_succeeds(tmp_path, capsys):
    path = tmp_path / "empty.transcript"
    path.write_text("")
    assert run_cli("replay", str(path)) == 0
    assert "timeslots: 0" in capsys.readouterr().out


def test_replay_missing_file_fails(capsys):
    assert run_cli("replay", "/nonexistent/never.transcript") == 1
    assert "cannot read" in capsys.readouterr().err


def test_sweep_emits_one_row_per_cell(tmp_path, capsys):
    out = tmp_path / "out"
    code = run_cli(
        "sweep", "--protocol", "duplex", "--timeslots", "60", "--max-pairs", "5",
        "--intercept", "0,1", "--sessions", "200", "--seed", "3", "--out", str(out),
    )
    assert code == 0
    payload = json.loads((out / "sweep.json").read_text())
    rows = payload["sweep"]["rows"]
    assert len(rows) == 2
    assert all(row["sessions"] == 200 for row in rows)
    detection = {row["intercept_fraction"]: row["detection_rate"] for row in rows}
    assert detection[0.0] == 0.0
    assert detection[1.0] >= detection[0.0]
    csv_lines = (out / "sweep.csv").read_text().splitlines()
    assert len(csv_lines) == 3
    assert "sessions" in csv_lines[0]


def test_sweep_rejects_an_empty_grid(capsys):
    assert run_cli("sweep", "--intercept", "", "--flip", "", "--loss", "") == 2
    assert "grid is empty" in capsys.readouterr().err


def test_identical_runs_are_byte_identical(tmp_path):
    args = [
        "run", "--protocol", "duplex", "--timeslots", "80", "--intercept", "0.5",
        "--sessions", "20", "--seed", "42",
    ]
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert run_cli(*args, "--out", str(out_a)) == 0
    assert run_cli(*args, "--out", str(out_b)) == 0
    assert (out_a / "report.json").read_bytes() == (out_b / "report.json").read_bytes()
    assert (out_a / "sessions.csv").read_bytes() == (out_b / "sessions.csv").read_bytes()


def test_environment_variable_overrides_the_seed(tmp_path, monkeypatch):
    out_env = tmp_path / "env"
    out_flag = tmp_path / "flag"
    monkeypatch.setenv("DUPLEXQKD_SEED", "77")
    assert run_cli("run", "--timeslots", "60", "--seed", "1", "--out", str(out_env)) == 0
    monkeypatch.delenv("DUPLEXQKD_SEED")
    assert run_cli("run", "--timeslots", "60", "--seed", "77", "--out", str(out_flag)) == 0
    env_payload = json.loads((out_env / "report.json").read_text())
    flag_payload = json.loads((out_flag / "report.json").read_text())
    assert env_payload["sessions"] == flag_payload["sessions"]
    assert env_payload["config"]["seed"] == 77


def test_config_file_supplies_defaults_and_flags_override(tmp_path):
    config = tmp_path / "run.conf"
    config.write_text(
        "# batch defaults\n"
        "protocol = duplex\n"
        "timeslots = 90\n"
        "sessions = 4\n"
        "seed = 6\n"
    )
    out_file = tmp_path / "from-file"
    assert run_cli("--config", str(config), "run", "--out", str(out_file)) == 0
    payload = json.loads((out_file / "report.json").read_text())
    assert payload["config"]["timeslots"] == 90
    assert payload["config"]["sessions"] == 4

    out_override = tmp_path / "override"
    assert (
        run_cli("--config", str(config), "run", "--sessions", "2", "--out", str(out_override))
        == 0
    )
    payload = json.loads((out_override / "report.json").read_text())
    assert payload["config"]["sessions"] == 2
    assert payload["config"]["timeslots"] == 90


def test_console_entry_point_runs():
    result = subprocess.run(
        [sys.executable, "-m", "duplexqkd.cli", "replay", str(example_transcript_path())],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert "keys_agree: yes" in result.stdout
