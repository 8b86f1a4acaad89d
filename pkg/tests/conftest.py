from __future__ import annotations

import pytest

from hilbert_padic.field import Field


@pytest.fixture(scope="session")
def f9() -> Field:
    return Field(3, 2)


@pytest.fixture(scope="session")
def f16() -> Field:
    return Field(2, 4)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
