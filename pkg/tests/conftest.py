import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from gttm import io  # noqa: E402
from gttm.braid import ConnectionMatrix, GradedBasis  # noqa: E402
from gttm.poset import FinitePoset  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def ex212():
    return io.load("example_2_12.json")


@pytest.fixture
def chain3():
    P = FinitePoset.chain(["1", "2", "3"])
    return GradedBasis([("1", "1", 0), ("2", "2", 1), ("3", "3", 1)], P)


def make_delta(basis, entries):
    M = np.zeros((len(basis), len(basis)), dtype=np.uint8)
    for r, c in entries:
        M[basis.index(r), basis.index(c)] = 1
    return ConnectionMatrix(basis, M)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)
