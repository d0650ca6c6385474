"""Shared pytest wiring for the acceptance suite.

Each acceptance test records one pass/fail line through record(); the
terminal-summary hook replays them in a dedicated section so the verdicts
stay visible even when pytest captures stdout.
"""

_ACCEPTANCE_LINES = []


def record(line):
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
