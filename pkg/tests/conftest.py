import numpy as np
import pytest

from fidreg.core import Dataset


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_sparse(rng):
    """n=30, p=10 instance with two active predictors."""
    x = rng.standard_normal((30, 10))
    y = 1.5 * x[:, 2] - 1.0 * x[:, 7] + rng.standard_normal(30)
    return Dataset(x, y)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
