import subprocess
import sys

import pytest

from quasimeans.cli import (
    CheckCommand,
    EvalCommand,
    FxReportCommand,
    SweepCommand,
    UsageError,
    main,
    parse_args,
    run,
)
from quasimeans.errors import SpecParseError
from quasimeans.reports import parse_record


def invoke(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


class TestParse:
    def test_eval(self):
        cmd = parse_args(["eval", "--mean", "geometric:0.5,0.5", "--", "2", "8"])
        assert isinstance(cmd, EvalCommand) and cmd.inputs == (2.0, 8.0)

    def test_check(self):
        cmd = parse_args(["check", "all", "--mean", "power:1:0.5,0.5"])
        assert isinstance(cmd, CheckCommand) and cmd.name == "all"
        assert cmd.target.label == "power:1:0.5,0.5"

    def test_bad_spec(self):
        with pytest.raises(SpecParseError):
            parse_args(["eval", "--mean", "nonsense"])

    def test_fx_and_sweep(self, data_dir):
        path = str(data_dir / "usd_gbp_pair.csv")
        cmd = parse_args(["fx-report", path, "--mean", "power:2", "--window", "0:2"])
        assert isinstance(cmd, FxReportCommand) and cmd.window == (0, 2)
        assert isinstance(parse_args(["sweep", path, "--steps", "3"]), SweepCommand)

    def test_check_needs_target(self):
        with pytest.raises(UsageError):
            parse_args(["check", "reciprocal"])
        with pytest.raises(UsageError):
            parse_args(["check", "reciprocal", "--generator", "log"])

    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit) as err:
            parse_args(["frobnicate"])
        assert err.value.code == 2


class TestRun:
    def test_eval_prints_4(self, capsys):
        status, out, _ = invoke(capsys, "eval", "--mean", "geometric:0.5,0.5", "--", "2", "8")
        assert (status, out) == (0, "4\n")

    def test_eval_generator(self, capsys):
        status, out, _ = invoke(capsys, "eval", "--generator", "power:2", "--weights",
                                "0.5,0.5", "--", "1", "7")
        assert status == 0 and float(out) == pytest.approx(5)

    def test_eval_bad_spec_exit(self, capsys):
        status, _, err = invoke(capsys, "eval", "--mean", "nonsense")
        assert status == 2 and "unknown mean family" in err

    def test_eval_domain_error(self, capsys):
        status, out, err = invoke(capsys, "eval", "--mean", "geometric", "--", "-1", "2")
        assert status == 2 and out == "" and "inputs: -1,2" in err

    def test_eval_arity_mismatch(self, capsys):
        status, _, _ = invoke(capsys, "eval", "--mean", "power:1:0.5,0.5", "--", "1", "2", "3")
        assert status == 2

    def test_reciprocal_geometric_passes(self, capsys):
        status, out, _ = invoke(capsys, "check", "reciprocal", "--mean", "geometric")
        assert status == 0 and "pass" in out

    def test_reciprocal_power_fails_with_worst_input(self, capsys):
        status, out, _ = invoke(capsys, "check", "reciprocal", "--mean", "power:1",
                                "--format", "records")
        assert status == 1
        rec = parse_record(out.splitlines()[0])
        assert rec["verdict"] == "fail" and len(rec["worst_input"].split(",")) == 2

    def test_generator_check(self, capsys):
        status, out, _ = invoke(capsys, "check", "affine-reciprocal", "--generator", "log",
                                "--format", "records")
        assert status == 0 and parse_record(out.splitlines()[0])["params"] == "a=-1,b=0"

    def test_check_all_generator(self, capsys):
        status, out, _ = invoke(capsys, "check", "all", "--generator", "exp-power:2:1",
                                "--format", "records")
        verdicts = {r["check"]: r["verdict"] for r in map(parse_record, out.splitlines())}
        # e*x^2 is multiplicatively but not affinely reciprocal
        assert status == 1
        assert verdicts["multiplicative-reciprocal"] == "pass"
        assert verdicts["affine-reciprocal"] == "fail"
        assert all(v == "pass" for k, v in verdicts.items() if k.startswith("equiv:"))

    def test_classify(self, capsys):
        status, out, _ = invoke(capsys, "check", "classify", "--mean", "power:0")
        assert status == 0 and "must be the weighted geometric mean" in out

    def test_daroczy_pales(self, capsys):
        status, _, _ = invoke(capsys, "check", "daroczy-pales", "--samples", "1000")
        assert status == 0

    def test_check_domain_error(self, capsys):
        status, _, err = invoke(capsys, "check", "odd-shift", "--generator", "log")
        assert status == 2 and "symmetric" in err

    def test_fx_report(self, capsys, data_dir):
        path = str(data_dir / "usd_gbp_pair.csv")
        status, out, _ = invoke(capsys, "fx-report", path, "--mean", "power:-1", "--mean",
                                "power:0", "--mean", "power:1", "--format", "records")
        rows = [parse_record(line) for line in out.splitlines()]
        assert status == 0
        assert [r["consistent"] for r in rows] == ["no", "yes", "no"]
        assert [float(r["product"]) for r in rows] == pytest.approx([0.64, 1, 1.5625], abs=1e-12)

    def test_fx_report_decay(self, capsys, data_dir):
        path = str(data_dir / "usd_gbp_daily.csv")
        status, out, _ = invoke(capsys, "fx-report", path, "--weights", "exp-decay:0.9")
        assert status == 0 and "geometric" in out

    def test_fx_report_missing_file(self, capsys):
        status, _, err = invoke(capsys, "fx-report", "/no/such.csv")
        assert status == 2 and err.startswith("error:")

    def test_sweep(self, capsys, data_dir):
        path = str(data_dir / "usd_gbp_pair.csv")
        status, out, _ = invoke(capsys, "sweep", path, "--r-min", "-1", "--r-max", "1",
                                "--steps", "3", "--format", "records")
        rows = [parse_record(line) for line in out.splitlines()]
        assert status == 0 and [r["r"] for r in rows] == ["-1", "0", "1"]
        assert float(rows[0]["log_gap"]) == pytest.approx(-float(rows[2]["log_gap"]), abs=1e-10)

    def test_run_returns_outcome(self):
        outcome = run(parse_args(["eval", "--mean", "power:2", "--", "1", "7"]))
        assert outcome.status == 0 and outcome.err == ""


def test_byte_identical_output():
    argv = [sys.executable, "-m", "quasimeans", "check", "all", "--mean", "power:1.5",
            "--seed", "9", "--format", "records"]
    first = subprocess.run(argv, capture_output=True)
    second = subprocess.run(argv, capture_output=True)
    assert first.returncode == second.returncode == 1
    assert first.stdout == second.stdout and first.stdout


def test_help_documents_grammar():
    proc = subprocess.run([sys.executable, "-m", "quasimeans", "--help"], capture_output=True,
                          text=True)
    assert proc.returncode == 0
    assert "quasiarithmetic:<generator>" in proc.stdout
