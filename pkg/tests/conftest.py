"""Shared pytest hooks: the acceptance suite's per-criterion verdict lines."""

import pytest

_VERDICTS = {}


@pytest.fixture
def verdict():
    """Call ``verdict(number, ok, detail)``; the line is printed at session end."""

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _VERDICTS[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_VERDICTS):
        terminalreporter.write_line(_VERDICTS[number])
