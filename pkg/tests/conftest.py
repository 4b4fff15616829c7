import sys

import numpy as np
import pytest

from obliqueframes import Frame, SubspacePair

R2 = np.sqrt(2.0)
R3 = np.sqrt(3.0)


@pytest.fixture
def example_pair():
    """V = span{e2, (e1 + e3)/sqrt2}, W = span{e1, e2} in C^3."""
    V = np.array([[0, 1, 0], [1 / R2, 0, 1 / R2]]).T
    W = np.eye(3)[:, :2]
    return SubspacePair(V, W)


@pytest.fixture
def F1():
    return Frame.from_rows([[1, 0, 0], [0.5, R3 / 2, 0]])


@pytest.fixture
def F2():
    a = np.pi / 2 + np.pi / 3
    return Frame.from_rows([[0, 1, 0], [np.cos(a), np.sin(a), 0]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("tests.test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
