import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rffso.channel import LinkParams  # noqa: E402

# acceptance lines collected by test_acceptance.py, echoed in the terminal summary
ACCEPTANCE_LINES = []


def link(xi=1.0, gbar=10.0, gbar2=None):
    return LinkParams(2.1, 3.5, xi, 0.6, gbar, gbar if gbar2 is None else gbar2)


@pytest.fixture
def ref_link():
    return link()


@pytest.fixture(params=[1.0, 6.7, math.inf], ids=["xi1", "xi6.7", "xiinf"])
def any_xi(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
