"""Shared fixtures and the per-criterion acceptance report."""

from __future__ import annotations

import pytest

ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


class Criterion:
    """Collects the verdict of one acceptance criterion."""

    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.reported = False

    def report(self, passed: bool, detail: str) -> None:
        ACCEPTANCE[self.number] = (self.title, bool(passed), detail)
        self.reported = True
        print(f"{'PASS' if passed else 'FAIL'} criterion {self.number:2d} ({self.title}): {detail}")
        assert passed, detail


@pytest.fixture
def criterion():
    made = []

    def make(number: int, title: str) -> Criterion:
        c = Criterion(number, title)
        made.append(c)
        return c

    yield make
    for c in made:
        if not c.reported:
            ACCEPTANCE[c.number] = (c.title, False, "errored before reporting")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(
            f"{'PASS' if passed else 'FAIL'} criterion {number:2d} ({title}): {detail}")
