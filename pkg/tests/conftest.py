import re

_results = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m or (report.when != "call" and report.passed):
        return
    detail = dict(report.user_properties).get("detail", "")
    if report.when == "call" or report.failed:
        _results[int(m.group(1))] = (m.group(2).replace("_", " "), report.passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        name, ok, detail = _results[n]
        terminalreporter.write_line(f"criterion {n} {'PASS' if ok else 'FAIL'}  {name}: {detail}")
