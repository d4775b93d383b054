import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

# lines appended by the acceptance tests, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def fixture_data():
    def load(name):
        return json.loads((FIXTURES / name).read_text())

    return load


@pytest.fixture
def report():
    def emit(number, title, ok, detail=""):
        line = f"[acceptance {number}] {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
