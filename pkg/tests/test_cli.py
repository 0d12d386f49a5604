"""Config parsing, report rendering, and the command line interface."""

import csv
import io

import pytest

from dcsim.cli import (CSV_COLUMNS, ConfigError, DEFAULT_POLICIES, emit_report,
                       expand_rows, main, parse_config, run_experiment)
from dcsim.policies import PolicyConfig


def test_empty_config_gives_default_experiment():
    spec = parse_config("")
    assert list(spec.policies) == list(DEFAULT_POLICIES)
    assert len(spec.scenario.hosts) == 100
    assert len(spec.scenario.vms) == 290
    assert spec.scenario.seed == 42
    assert spec.scenario.runs == 10


def test_config_scalars_and_policy_sections():
    spec = parse_config("""
        seed = 7
        runs = 3
        frame_seconds = 120
        hosts = 10
        vms = 20

        [policy]
        kind = MM
        lower = 0.3
        upper = 0.7

        [policy]
        kind = NPA
    """)
    assert spec.scenario.seed == 7
    assert spec.scenario.runs == 3
    assert spec.scenario.frame_seconds == 120.0
    assert len(spec.scenario.hosts) == 10
    assert len(spec.scenario.vms) == 20
    assert spec.policies == [PolicyConfig("MM", 0.3, 0.7), PolicyConfig("NPA")]


def test_config_comments_and_blank_lines():
    spec = parse_config("# a comment\n\nseed = 9  # trailing\n")
    assert spec.scenario.seed == 9


@pytest.mark.parametrize("text,fragment", [
    ("bogus = 1", "unknown key"),
    ("seed = x", "bad value"),
    ("[nonsense]", "unknown section"),
    ("seed", "expected key = value"),
    ("[policy]\nlower = 0.3", "missing 'kind'"),
    ("[policy]\nkind = MM\nlower = 0.9\nupper = 0.1", "lower < upper"),
    ("[sweep]\nstep = 2", "unknown sweep key"),
    ("[sweep]\npairs = 0.3-0.7", "bad threshold pair"),
])
def test_config_errors(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_config(text)


def test_config_errors_carry_line_numbers():
    with pytest.raises(ConfigError, match="line 3"):
        parse_config("seed = 1\nruns = 2\nbogus = 3\n")


def test_sweep_expands_threshold_grid():
    spec = parse_config("""
        [policy]
        kind = MM

        [policy]
        kind = ST

        [sweep]
        pairs = 0.3:0.7, 0.4:0.8
    """)
    rows = expand_rows(spec)
    assert rows == [PolicyConfig("MM", 0.3, 0.7), PolicyConfig("MM", 0.4, 0.8),
                    PolicyConfig("ST", upper_threshold=0.7),
                    PolicyConfig("ST", upper_threshold=0.8)]


def test_policy_without_thresholds_or_grid_is_an_error():
    with pytest.raises(ConfigError, match="thresholds"):
        parse_config("[policy]\nkind = MM\n")


def tiny_config(runs=2):
    return ("seed = 42\nruns = %d\nhosts = 12\nvms = 24\nframe_seconds = 30\n"
            "[policy]\nkind = DVFS\n[policy]\nkind = MM\nlower = 0.3\nupper = 0.7\n"
            % runs)


def test_report_has_exact_csv_columns():
    report = run_experiment(parse_config(tiny_config()))
    payload = emit_report(report, format="csv").decode("utf-8")
    rows = list(csv.reader(io.StringIO(payload)))
    assert rows[0] == CSV_COLUMNS
    assert len(rows) == 3
    assert rows[1][0] == "DVFS"
    assert rows[2][0] == "MM"
    assert rows[2][1] == "30"   # thresholds render as percentages
    assert rows[2][2] == "70"


def test_csv_uses_crlf_line_endings():
    report = run_experiment(parse_config(tiny_config()))
    assert b"\r\n" in emit_report(report, format="csv")


def test_static_policies_render_blank_sla_cells():
    report = run_experiment(parse_config(tiny_config()))
    payload = emit_report(report, format="csv").decode("utf-8")
    rows = list(csv.reader(io.StringIO(payload)))
    header = {name: i for i, name in enumerate(rows[0])}
    dvfs = rows[1]
    assert dvfs[header["sla_pct_mean"]] == ""
    assert dvfs[header["avg_sla_pct_mean"]] == ""


def test_table_format_aligns_same_cells():
    report = run_experiment(parse_config(tiny_config()))
    table = emit_report(report, format="table").decode("utf-8")
    lines = table.splitlines()
    assert len(lines) == 3
    assert lines[0].startswith("policy")


def test_empty_report_renders_header_only():
    from dcsim.cli import Report
    payload = emit_report(Report(rows=[], metadata={}), format="csv")
    assert payload.decode("utf-8").strip().split(",") == CSV_COLUMNS


def test_emit_report_rejects_unknown_format():
    report = run_experiment(parse_config(tiny_config()))
    with pytest.raises(ValueError):
        emit_report(report, format="yaml")


def test_main_writes_csv_to_stdout(capsys):
    rc = main(["--policy", "DVFS", "--hosts", "12", "--vms", "24", "--runs", "1"])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.startswith("policy,")


def test_main_writes_output_file(tmp_path):
    out = tmp_path / "report.csv"
    rc = main(["--policy", "DVFS", "--hosts", "12", "--vms", "24",
               "--runs", "1", "--out", str(out)])
    assert rc == 0
    assert out.read_bytes().startswith(b"policy,")


def test_main_is_byte_identical_across_invocations(tmp_path):
    args = ["--policy", "MM", "--lower", "30", "--upper", "70",
            "--hosts", "12", "--vms", "24", "--runs", "2"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_flag_thresholds_are_percentages(tmp_path):
    out = tmp_path / "r.csv"
    rc = main(["--policy", "ST", "--upper", "50", "--hosts", "12",
               "--vms", "24", "--runs", "1", "--out", str(out)])
    assert rc == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert rows[1][2] == "50"


def test_policy_flag_repeats(tmp_path):
    out = tmp_path / "r.csv"
    rc = main(["--policy", "NPA", "--policy", "DVFS", "--hosts", "12",
               "--vms", "24", "--runs", "1", "--out", str(out)])
    assert rc == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert [r[0] for r in rows[1:]] == ["NPA", "DVFS"]


def test_validation_error_exits_1(capsys):
    rc = main(["--policy", "MM", "--hosts", "12", "--vms", "24"])
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_unknown_policy_exits_1(capsys):
    rc = main(["--policy", "BOGUS"])
    assert rc == 1


def test_bad_flag_value_exits_1():
    with pytest.raises(SystemExit) as exc:
        main(["--seed", "notanumber"])
    assert exc.value.code == 1


def test_infeasible_scenario_exits_2(capsys):
    rc = main(["--policy", "NPA", "--hosts", "1", "--vms", "24", "--runs", "1"])
    assert rc == 2
    assert "infeasible" in capsys.readouterr().err


def test_config_file_with_flag_overrides(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(tiny_config())
    out = tmp_path / "r.csv"
    rc = main(["--config", str(cfg), "--runs", "1", "--format", "csv",
               "--out", str(out)])
    assert rc == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    header = {name: i for i, name in enumerate(rows[0])}
    assert rows[1][header["runs"]] == "1"
