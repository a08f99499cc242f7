import sys
from pathlib import Path

import pytest

from klcube.graph import SymmetricGroup
from klcube.klbase import KLTable

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def groups():
    return {n: SymmetricGroup(n) for n in (2, 3, 4, 5)}


@pytest.fixture(scope="session")
def tables():
    return {n: KLTable(n) for n in (2, 3, 4, 5, 6)}


@pytest.fixture(scope="session")
def crown5_path():
    return FIXTURES / "crown5.json"


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance():
    def report(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
