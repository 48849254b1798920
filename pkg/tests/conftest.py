import numpy as np
import pytest
from hypothesis import settings

from picard_ns import GridSpec, TimeGrid

settings.register_profile("default", deadline=None, max_examples=25)
settings.load_profile("default")

_ACCEPTANCE = []


@pytest.fixture
def acceptance_log():
    """Record one pass/fail line per acceptance criterion."""

    def log(criterion: str, ok: bool, detail: str = ""):
        line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return log


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture
def small_grid():
    return GridSpec(8.0, 64)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def short_time():
    return TimeGrid(0.5, 40)
