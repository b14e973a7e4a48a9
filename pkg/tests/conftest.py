import pytest

_acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if item.module.__name__.endswith("test_acceptance") and report.when == "call":
        title = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _acceptance[item.nodeid] = (title, report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for title, outcome in _acceptance.values():
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {title}")
