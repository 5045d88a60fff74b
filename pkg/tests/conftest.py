import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from vilenkin_lab.group import RadixSequence

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

RADICES = {
    "walsh": RadixSequence.walsh(12),
    "twothree": RadixSequence.cycle((2, 3), 12),
    "threefour": RadixSequence.cycle((3, 4), 8),
    "mixed": RadixSequence((2, 3, 4, 2, 5)),
}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def tmp_store(tmp_path):
    from vilenkin_lab.harness.regression import RegressionStore

    return RegressionStore(tmp_path / "regression.json")


VERDICTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)
