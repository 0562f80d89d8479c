import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

import pytest


@pytest.fixture(scope="session")
def gk3():
    """The full construction for k = 3 over PG(2, 11); built once per session."""
    from conngame.constructions import gk_construction

    return gk_construction(3, 11, "full")


ACCEPTANCE: dict[str, str] = {}


def record(criterion: str, ok: bool, detail: str) -> bool:
    """Store the one-line verdict for an acceptance criterion and echo it."""
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE[criterion] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda c: (int("".join(ch for ch in c if ch.isdigit())), c)):
        terminalreporter.write_line(ACCEPTANCE[key])
