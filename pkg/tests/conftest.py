"""Shared pytest hooks: collect acceptance verdict lines for the summary.

Stdout written inside tests is captured (and discarded for passing tests),
so the acceptance checks register their one-line verdicts here and a
terminal-summary hook prints them after capture is undone.  This keeps one
PASS/FAIL line per acceptance check visible in any test log.
"""

_VERDICTS = []


def record_verdict(line: str) -> None:
    _VERDICTS.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance verdicts")
    for line in _VERDICTS:
        terminalreporter.write_line(line)
