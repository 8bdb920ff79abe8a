import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA = {}



@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call" and not report.failed:
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, {"title": title, "failed": [], "count": 0})
    if report.when == "call":
        entry["count"] += 1
    if report.failed:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "FAIL" if entry["failed"] else "PASS"
        line = f"[{status}] criterion {number:2d}: {entry['title']}"
        if entry["failed"]:
            line += "  (failed: " + ", ".join(entry["failed"]) + ")"
        terminalreporter.write_line(line)
