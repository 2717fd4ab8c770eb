"""Shared pytest plumbing for the acceptance suite.

Acceptance tests report their verdict through record_acceptance; the hook
below echoes one pass/fail line per criterion at the end of the run so the
outcome is visible even when pytest captures stdout.
"""

_ACCEPTANCE: dict[int, str] = {}


def record_acceptance(number: int, label: str, passed: bool, detail: str = "") -> None:
    verdict = "PASS" if passed else "FAIL"
    line = f"criterion {number:2d} ({label}): {verdict}"
    if detail:
        line = f"{line}  [{detail}]"
    _ACCEPTANCE[number] = line


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[number])
