"""Collects acceptance-criterion verdicts and echoes them after the run.

The acceptance tests report one PASS/FAIL line each; fd-level capture would
otherwise hide those lines for passing tests, so they are replayed in a
dedicated terminal section at the end of the session.
"""

ACCEPTANCE_REPORT: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_REPORT:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_REPORT:
            terminalreporter.write_line(line)
