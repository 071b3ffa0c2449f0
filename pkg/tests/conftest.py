"""Prints one pass/fail line per acceptance criterion after the run."""
import pytest

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    key = marker.args
    if report.failed or report.skipped:
        _results[key] = False
    else:
        _results.setdefault(key, True)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    def order(item):
        number = str(item[0][0])
        digits = number.rstrip("abcdefghijklmnopqrstuvwxyz")
        return int(digits), number[len(digits):]

    for (number, title), ok in sorted(_results.items(), key=order):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
