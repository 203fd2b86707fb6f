"""Shared pytest plumbing.

Collects the acceptance verdict lines registered by test_acceptance.py and
prints them in one block at the end of the run, one line per criterion.
"""

ACCEPTANCE_VERDICTS: dict[int, str] = {}


def record_verdict(num: int, passed: bool, label: str) -> None:
    state = "PASS" if passed else "FAIL"
    ACCEPTANCE_VERDICTS[num] = f"[{num}] {label}: {state}"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_VERDICTS:
        return
    terminalreporter.section("acceptance")
    for num in sorted(ACCEPTANCE_VERDICTS):
        terminalreporter.write_line(ACCEPTANCE_VERDICTS[num])
