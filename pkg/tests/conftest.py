"""Prints one PASS/FAIL line per release criterion after the run.

Tests marked ``@pytest.mark.criterion("...")`` report into a summary
section so the gate is readable without scrolling the full log.
"""

import pytest

_results = []


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(name): release criterion checked by this test"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        _results.append((marker.args[0], report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("release criteria")
    for name, passed in _results:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}")
