import numpy as np
import pytest

from gerstenwerk.algebra import corpus
from gerstenwerk.bar import BarResolution
from gerstenwerk.lifting import GerstenhaberEngine

CORPUS = corpus()
NAMES = list(CORPUS)


@pytest.fixture(scope="session")
def algebras():
    return CORPUS


@pytest.fixture(scope="session")
def engines():
    """One AW-diagonal engine per corpus algebra on the window N = 6."""
    return {name: GerstenhaberEngine(BarResolution(A, 6)) for name, A in CORPUS.items()}


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
