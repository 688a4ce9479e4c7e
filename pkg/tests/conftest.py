"""Shared pytest hooks: surface acceptance pass/fail lines in the summary.

Capture (including fd-level) swallows prints from passing tests, so the
acceptance suite records its lines here and they are emitted once at the
end of the run.
"""

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
