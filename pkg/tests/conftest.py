"""Collects one verdict line per acceptance criterion for the terminal summary."""

import pytest

VERDICTS: dict[int, str] = {}
CRITERIA = range(1, 13)


@pytest.fixture
def criterion():
    def record(n: int, title: str, ok: bool, detail: str = "") -> bool:
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f" [{detail}]"
        VERDICTS[n] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    ran = [r for rs in terminalreporter.stats.values() for r in rs
           if getattr(r, "nodeid", "").startswith("tests/test_acceptance.py")]
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for n in CRITERIA:
        terminalreporter.write_line(VERDICTS.get(n, f"criterion {n:2d}: FAIL  (no verdict recorded)"))
