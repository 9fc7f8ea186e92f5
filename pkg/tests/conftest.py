import re

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[key] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), verdict in sorted(_ACCEPTANCE.items()):
        terminalreporter.write_line(f"criterion {num:2d} {name}: {verdict}")


@pytest.fixture(scope="session")
def led():
    from shiftlab.shifts import ledrappier
    return ledrappier()


@pytest.fixture(scope="session")
def T():
    from shiftlab.geometry import unit_triangle
    return unit_triangle()
