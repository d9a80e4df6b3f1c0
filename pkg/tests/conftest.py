from __future__ import annotations


_RESULTS: dict[int, tuple[str, str]] = {}
_TITLES: dict[str, tuple[int, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _TITLES[item.nodeid] = (m.args[0], m.args[1])


def pytest_runtest_logreport(report):
    if report.nodeid not in _TITLES:
        return
    num, title = _TITLES[report.nodeid]
    if report.when == "call" or report.outcome != "passed":
        prev = _RESULTS.get(num, ("PASS", title))[0]
        status = "PASS" if report.passed and prev == "PASS" else "FAIL"
        _RESULTS[num] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_RESULTS):
        status, title = _RESULTS[num]
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {title}")
