import pytest

ACCEPTANCE: dict = {}


@pytest.fixture
def record():
    """Store one pass/fail line for an acceptance criterion."""
    def _record(number: int, title: str, passed: bool, detail: str = "") -> bool:
        line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}"
        if detail:
            line += f"  ({detail})"
        ACCEPTANCE[number] = line
        print(line)
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
