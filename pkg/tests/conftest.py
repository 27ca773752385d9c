"""Shared pytest hooks: a one-line-per-criterion summary for the acceptance run."""

import pytest

_results: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = _results.setdefault(number, {"title": title, "passed": True, "seconds": 0.0})
    if report.when == "call":
        entry["seconds"] += report.duration
    if report.failed:
        entry["passed"] = False
        crash = getattr(report.longrepr, "reprcrash", None)
        entry["reason"] = (crash.message if crash else str(report.longrepr)).splitlines()[0][:200]


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_results):
        e = _results[number]
        status = "PASS" if e["passed"] else "FAIL"
        tr.write_line(f"criterion {number:>2}: {status}  {e['title']} ({e['seconds']:.1f} s)")
        if not e["passed"]:
            tr.write_line(f"              {e.get('reason', '')}")
