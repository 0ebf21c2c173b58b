import numpy as np
import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def report_line():
    """Record one PASS/FAIL line for the acceptance summary and echo it."""
    def record(number, ok, text):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {text}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
