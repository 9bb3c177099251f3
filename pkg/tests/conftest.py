import pytest

_REPORT = []


@pytest.fixture
def report():
    """Record one acceptance verdict line and fail the test if it did not pass."""
    def _report(number, title, ok, detail, seconds):
        line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail} ({seconds:.2f} s)"
        _REPORT.append(line)
        print(line)
        assert ok, line
    return _report


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_REPORT, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
