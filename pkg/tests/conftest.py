import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = _CRITERIA.get(report.nodeid)
    if marker is None:
        return
    props = dict(report.user_properties)
    marker["outcome"] = report.outcome
    marker["elapsed"] = props.get("elapsed")
    marker["limit"] = props.get("limit")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _CRITERIA[item.nodeid] = {"n": m.args[0], "title": m.args[1], "outcome": "not run"}


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for c in sorted(_CRITERIA.values(), key=lambda c: c["n"]):
        verdict = {"passed": "PASS", "failed": "FAIL"}.get(c["outcome"], c["outcome"].upper())
        timing = ""
        if c.get("elapsed") is not None:
            timing = f"  ({c['elapsed']:.2f}s, limit {c['limit']}s)"
        tr.write_line(f"criterion {c['n']} [{verdict}] {c['title']}{timing}")
