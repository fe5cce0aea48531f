import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from sumnet.fixtures import NAMES, fixture  # noqa: E402


@pytest.fixture(params=NAMES)
def any_fixture(request):
    return request.param, fixture(request.param)



ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line for an acceptance criterion."""

    def record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
