import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gaussnm.coeffs import ChannelParams, build_table  # noqa: E402


@pytest.fixture(scope="session")
def tables():
    """Default-temperature tables on [0, 50] for the three reference x values."""
    return {x: build_table(ChannelParams(x=x)) for x in (0.1, 0.3, 0.5)}


@pytest.fixture(scope="session")
def table_x01_long():
    return build_table(ChannelParams(x=0.1, tau_max=200.0))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance criterion, then assert."""

    def _report(label: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
