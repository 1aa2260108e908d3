import json

import pytest

from tachocheck.cli import main
from tachocheck.patterns import gen_weekly_sandwich
from tachocheck.profiles import builtin_profiles


@pytest.fixture
def sandwich_file(tmp_path):
    path = tmp_path / "sandwich.trace"
    path.write_text(gen_weekly_sandwich().to_records())
    return path


@pytest.fixture
def all_rest_file(tmp_path):
    path = tmp_path / "all_rest.trace"
    path.write_text("0,REST,604800\n")
    return path


def profile_file(tmp_path, name):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(builtin_profiles()[name].to_dict()))
    return path


def test_check_compliant_trace_exits_zero(tmp_path, all_rest_file, capsys):
    spirit = profile_file(tmp_path, "spirit")
    status = main(["check", str(all_rest_file), "--profile", str(spirit)])
    out = capsys.readouterr().out
    report = json.loads(out)
    assert status == 0
    assert report["violations"] == []
    assert report["statistics"]["total_driving_minutes"] == 0


def test_check_violating_trace_exits_one(tmp_path, sandwich_file, capsys):
    spirit = profile_file(tmp_path, "spirit")
    status = main(["check", str(sandwich_file), "--profile", str(spirit)])
    report = json.loads(capsys.readouterr().out)
    assert status == 1
    assert [v["article"] for v in report["violations"]] == ["6.1"]


def test_check_accepts_builtin_profile_names(all_rest_file, capsys):
    status = main(["check", str(all_rest_file), "--profile", "spirit"])
    capsys.readouterr()
    assert status == 0


def test_check_grid_offset_flag_overrides_profile(tmp_path, capsys):
    from tachocheck.patterns import find_shift_divergent

    path = tmp_path / "shift.trace"
    path.write_text(find_shift_divergent().to_records())
    assert main(["check", str(path), "--profile", "spirit"]) == 0
    capsys.readouterr()
    assert main(["check", str(path), "--profile", "spirit", "--grid-offset", "27"]) == 1
    capsys.readouterr()


def test_check_report_schema(tmp_path, sandwich_file, capsys):
    spirit = profile_file(tmp_path, "spirit")
    main(["check", str(sandwich_file), "--profile", str(spirit)])
    report = json.loads(capsys.readouterr().out)
    assert set(report) == {
        "trace",
        "grid_offset",
        "profile",
        "violations",
        "statistics",
        "notices",
    }
    assert set(report["trace"]) == {"digest", "start", "duration_seconds"}
    assert set(report["statistics"]) == {
        "total_driving_minutes",
        "daily_driving_spans",
        "rest_periods",
    }
    (violation,) = report["violations"]
    assert set(violation) == {"article", "window", "detail", "profile_id"}
    assert set(violation["window"]) == {"start", "end"}
    assert violation["profile_id"] == "spirit"


def test_check_pretty_summary_goes_to_stderr(tmp_path, sandwich_file, capsys):
    spirit = profile_file(tmp_path, "spirit")
    status = main(["check", str(sandwich_file), "--profile", str(spirit), "--pretty"])
    captured = capsys.readouterr()
    assert status == 1
    json.loads(captured.out)  # stdout stays pure JSON
    assert "violation" in captured.err


def test_check_output_is_byte_identical_across_runs(tmp_path, sandwich_file, capsys):
    spirit = profile_file(tmp_path, "spirit")
    main(["check", str(sandwich_file), "--profile", str(spirit)])
    first = capsys.readouterr().out
    main(["check", str(sandwich_file), "--profile", str(spirit)])
    second = capsys.readouterr().out
    assert first == second


def test_check_missing_file_and_bad_profile_exit_two(tmp_path, all_rest_file, capsys):
    assert main(["check", "no-such.trace", "--profile", "spirit"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"rule51": "Wrong"}')
    assert main(["check", str(all_rest_file), "--profile", str(bad)]) == 2
    capsys.readouterr()


def test_check_malformed_trace_exits_two(tmp_path, capsys):
    path = tmp_path / "bad.trace"
    path.write_text("0,DRIVING,60\n120,REST,60\n")
    assert main(["check", str(path), "--profile", "spirit"]) == 2
    capsys.readouterr()


def test_diff_reports_divergence_with_status_one(tmp_path, sandwich_file, capsys):
    letter = profile_file(tmp_path, "letter")
    spirit = profile_file(tmp_path, "spirit")
    status = main(
        ["diff", str(sandwich_file), "--profiles", str(letter), str(spirit)]
    )
    report = json.loads(capsys.readouterr().out)
    assert status == 1
    assert report["divergent"] is True
    assert report["disagreements"]


def test_diff_agreement_exits_zero(tmp_path, all_rest_file, capsys):
    letter = profile_file(tmp_path, "letter")
    spirit = profile_file(tmp_path, "spirit")
    status = main(
        ["diff", str(all_rest_file), "--profiles", str(letter), str(spirit)]
    )
    report = json.loads(capsys.readouterr().out)
    assert status == 0
    assert report["divergent"] is False


def test_demo_writes_trace_and_summary(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    status = main(["demo", "pattern1", "--out", "p1.trace"])
    summary = json.loads(capsys.readouterr().out)
    assert status == 0
    assert summary["verdicts"]["spirit"]["total_driving_minutes"] == 121
    text = (tmp_path / "p1.trace").read_text()
    assert text.startswith("0,DRIVING,3600")


def test_demo_unknown_name_exits_two(capsys):
    assert main(["demo", "nonsense"]) == 2
    capsys.readouterr()


def test_demo_weekly_sandwich_compares_letter_and_spirit(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    status = main(["demo", "weekly-sandwich"])
    summary = json.loads(capsys.readouterr().out)
    assert status == 0
    assert summary["verdicts"]["letter"]["violations"] == 0
    assert summary["verdicts"]["spirit"]["violations"] == 1
    assert (tmp_path / "weekly-sandwich.trace").exists()


def test_demo_compensation_chain_with_depth(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    status = main(["demo", "compensation-chain", "--depth", "2"])
    summary = json.loads(capsys.readouterr().out)
    assert status == 0
    assert summary["verdicts"]["spirit"]["violations"] == 0


def test_demo_shift_divergence(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    status = main(["demo", "shift-divergence"])
    summary = json.loads(capsys.readouterr().out)
    assert status == 0
    verdicts = summary["verdicts"]
    assert verdicts["unix-grid"]["violations"] != verdicts["utc-grid"]["violations"]


def test_machine_collatz_output(capsys):
    status = main(["machine", "collatz", "3", "--fuel", "100"])
    out = capsys.readouterr().out
    assert status == 0
    assert out.strip() == "3 10 5 16 8 4 2 1"


def test_machine_fuel_exhaustion_reports_last_value(capsys):
    status = main(["machine", "increment-forever", "0", "--fuel", "5"])
    captured = capsys.readouterr()
    assert status == 0
    assert captured.out.strip() == "5"
    assert "fuel exhausted" in captured.err


def test_partition_subcommand(capsys):
    status = main(["partition", "3,1,1,2,2,1"])
    payload = json.loads(capsys.readouterr().out)
    assert status == 0
    assert payload["difference"] == 0
    assert payload["side_a_total"] == payload["side_b_total"]


def test_partition_from_file(tmp_path, capsys):
    values = tmp_path / "values.txt"
    values.write_text("5\n5\n")
    status = main(["partition", "--file", str(values)])
    payload = json.loads(capsys.readouterr().out)
    assert status == 0
    assert payload["difference"] == 0


def test_partition_bad_values_exit_two(capsys):
    assert main(["partition", "3,x,1"]) == 2
    capsys.readouterr()


def test_logic_tautology(capsys):
    status = main(["logic", "R -> ((P & Q) -> R)"])
    payload = json.loads(capsys.readouterr().out)
    assert status == 0
    assert payload["tautology"] is True
    assert payload["witness"] is None


def test_logic_non_tautology_with_table(capsys):
    status = main(["logic", "(P & Q) -> R", "--table"])
    payload = json.loads(capsys.readouterr().out)
    assert status == 0
    assert payload["tautology"] is False
    assert payload["witness"] == {"P": 1, "Q": 1, "R": 0}
    assert len(payload["table"]) == 8


def test_logic_syntax_error_exits_two(capsys):
    assert main(["logic", "P &"]) == 2
    capsys.readouterr()


def test_unknown_subcommand_exits_two(capsys):
    assert main(["frobnicate"]) == 2
    capsys.readouterr()


def test_leap_table_flag(tmp_path, all_rest_file, capsys):
    table = tmp_path / "leap.json"
    table.write_text('[{"sunday_index": 0, "delta": -1}]')
    status = main(
        ["check", str(all_rest_file), "--profile", "spirit", "--leap-table", str(table)]
    )
    capsys.readouterr()
    assert status == 0
