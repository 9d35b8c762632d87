from __future__ import annotations

import numpy as np
import pytest

from resgrass.core import SplitSpace


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def s11() -> SplitSpace:
    return SplitSpace(1, 1)


@pytest.fixture
def s23() -> SplitSpace:
    return SplitSpace(2, 3)


SIZES = [SplitSpace(1, 1), SplitSpace(2, 3), SplitSpace(4, 4), SplitSpace(3, 1)]


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
