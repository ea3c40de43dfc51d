import math

from quasimeans.checks import CheckReport, classify_mean, check_reciprocal_self_conjugacy
from quasimeans.fx import ConsistencyReport
from quasimeans.means import Power, Weights
from quasimeans.reports import (
    check_record,
    check_table,
    classification_lines,
    fmt_float,
    parse_record,
    render_consistency,
)


def test_fmt_float():
    assert fmt_float(4.0) == "4"
    assert fmt_float(-2.0) == "-2"
    assert fmt_float(0.1) == "0.1"
    assert fmt_float(1e-300) == "1e-300"
    assert fmt_float(math.inf) == "inf"
    assert fmt_float(1e20) == "1e+20"
    assert float(fmt_float(1 / 3)) == 1 / 3


def test_check_record_round_trip():
    rep = CheckReport("reciprocal", "power:1", "fail", 0.5625, (2.0, 8.0), 256, 1e-10)
    fields = parse_record(check_record(rep))
    assert fields == {
        "check": "reciprocal", "subject": "power:1", "verdict": "fail",
        "max_residual": "0.5625", "tol": "1e-10", "samples": "256", "params": "-",
        "worst_input": "2,8",
    }


def test_record_params():
    rep = CheckReport("affine-reciprocal", "log", "pass", 0.0, (3.0,), 8, 1e-8, (-1.0, 0.0))
    assert parse_record(check_record(rep))["params"] == "a=-1,b=0"


def test_table_alignment(cfg):
    reps = [check_reciprocal_self_conjugacy(Power(r, Weights([0.5, 0.5])), cfg) for r in (0, 1)]
    lines = check_table(reps).splitlines()
    assert len(lines) == 3
    assert lines[0].startswith("check")
    col = lines[0].index("verdict")
    assert lines[1][col:col + 4] == "pass" and lines[2][col:col + 4] == "fail"


def test_classification_records(cfg):
    c = classify_mean(Power(0, Weights([0.5, 0.5])), cfg)
    fields = parse_record(classification_lines(c, "records"))
    assert fields["must_be_geometric"] == "yes"
    assert fields["homogeneous"] == "pass"


def test_consistency_rendering():
    ok = ConsistencyReport("geometric", 4.0, 0.25, 1.0, 0.0, True, 1e-9)
    bad = ConsistencyReport("oops", math.nan, math.nan, math.nan, math.nan, False, 1e-9,
                            error="arity")
    recs = render_consistency([ok, bad], "records").splitlines()
    assert parse_record(recs[0])["product"] == "1"
    assert parse_record(recs[1])["error"] == "arity"
    table = render_consistency([ok, bad])
    assert "error: arity" in table and "yes" in table
