import sys

import numpy as np
import pytest

from quasarppa.functions import RandomFamilyParams, make_example


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def ex1_instance():
    p = RandomFamilyParams.draw("example1", 5, 42)
    return p, make_example(p)


@pytest.fixture(scope="session")
def ex2_instance():
    p = RandomFamilyParams.draw("example2", 5, 7)
    return p, make_example(p)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)
