import pytest

from acceptance_log import RESULTS


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS, key=lambda k: (int("".join(c for c in k.split()[0] if c.isdigit())), k)):
        terminalreporter.write_line(RESULTS[key])


@pytest.fixture
def record():
    """Log one PASS/FAIL line for a criterion, then assert it."""

    def _record(key, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}"
        RESULTS[key] = line
        print(line)
        assert ok, line

    return _record
