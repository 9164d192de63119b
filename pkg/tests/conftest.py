_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            _CRITERIA[item.nodeid] = {"number": number, "title": title, "outcome": None}


def pytest_runtest_logreport(report):
    info = _CRITERIA.get(report.nodeid)
    if info is None:
        return
    if report.failed:
        info["outcome"] = "failed"
    elif report.when == "call" and info["outcome"] is None:
        info["outcome"] = "passed"


def pytest_terminal_summary(terminalreporter):
    ran = [c for c in _CRITERIA.values() if c["outcome"] is not None]
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(ran, key=lambda c: c["number"]):
        status = "PASS" if c["outcome"] == "passed" else "FAIL"
        terminalreporter.write_line(f"{status} criterion {c['number']}: {c['title']}")
