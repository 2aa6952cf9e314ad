import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sparsedom.generators import fig1_graph, fig3_graph  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture
def fig1():
    return fig1_graph()


@pytest.fixture
def fig3():
    g = fig3_graph()
    return g, g.ids("abc")


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def data_dir():
    return DATA


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for num in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[num])
