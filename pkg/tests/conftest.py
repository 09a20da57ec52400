import numpy as np
import pytest

from radial_nlw.rng import member_rng


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def stream():
    """Factory for deterministic member streams."""
    return lambda i, seed=11: member_rng(seed, i)


# -- acceptance reporting -----------------------------------------------------

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record ``(label, passed, detail)`` for the acceptance summary, then assert."""

    def record(label, passed, detail=""):
        ACCEPTANCE_LINES.append(f"{label}: {'PASS' if passed else 'FAIL'}  {detail}")
        print(ACCEPTANCE_LINES[-1])
        assert passed, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
