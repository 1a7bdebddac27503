import numpy as np
import pytest

_criteria = []


@pytest.fixture
def criterion():
    """Record a named pass/fail line for the acceptance summary."""

    def record(name, ok, detail=""):
        _criteria.append((name, bool(ok), detail))
        assert ok, f"{name}: {detail}"

    return record


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _criteria:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}  {detail}")
