import pytest

_RESULTS = []


@pytest.fixture
def criterion():
    """Record a named acceptance check; prints a PASS/FAIL line and asserts."""

    def check(label, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'}  {label}: {detail}"
        _RESULTS.append(line)
        print(line)
        assert passed, line

    return check


def pytest_terminal_summary(terminalreporter):
    if _RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in _RESULTS:
            terminalreporter.write_line(line)
