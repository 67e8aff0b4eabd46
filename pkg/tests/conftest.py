import pytest

ACCEPTANCE_KEY = "acceptance"


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    for key, value in report.user_properties:
        if key == ACCEPTANCE_KEY:
            _results.append((value[0], value[1], report.passed, value[2]))


_results: list = []


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_results):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number}. {title}: {detail}")


@pytest.fixture
def criterion(record_property):
    """Call with (number, title, detail) once the measured quantity is known."""

    def record(number, title, detail):
        record_property(ACCEPTANCE_KEY, (number, title, detail))

    return record
