import math
from pathlib import Path

import pytest

from quasimeans.checks import SampleConfig
from quasimeans.generators import table_generator

DATA = Path(__file__).resolve().parents[1] / "src" / "quasimeans" / "data"

_acceptance = []


@pytest.fixture
def cfg():
    return SampleConfig(seed=1234)


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def sinh_table():
    ts = [i / 4 for i in range(-20, 21)]
    return table_generator(ts, [math.sinh(t) for t in ts], label="sinh-table")


def pytest_runtest_logreport(report):
    if "test_acceptance" in report.nodeid and report.when == "call":
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))
    elif "test_acceptance" in report.nodeid and report.when == "setup" and report.failed:
        _acceptance.append((report.nodeid.split("::")[-1], "error"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}")
