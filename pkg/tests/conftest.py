import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sdlearn.instance import Instance  # noqa: E402

CRITERIA_LINES: list[str] = []


@pytest.fixture
def intro_instance():
    # agent 1 values a=9, b=1; agent 2 values a=10, b=8 (items a=1, b=2)
    return Instance.from_weights([[9, 1], [10, 8]]).checked()


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA_LINES:
            terminalreporter.write_line(line)
