import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_results: dict[int, tuple[str, str, float]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    n, name = int(m.group(1)), m.group(2).replace("_", " ")
    if report.when == "call" or report.failed:
        status = "PASS" if report.passed else "FAIL"
        if report.skipped:
            status = "SKIP"
        prev = _results.get(n)
        if prev is None or prev[0] == "PASS":
            _results[n] = (status, name, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_results):
        status, name, secs = _results[n]
        tr.write_line(f"criterion {n:2d}: {status}  {name} ({secs:.1f}s)")
