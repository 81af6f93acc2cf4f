import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from barycentric import HullModel, MetricKind, SemilatticeModel, TableModel  # noqa: E402

F = Fraction


@pytest.fixture
def triangle():
    return HullModel([(0, 0), (1, 0), (0, 1)], MetricKind.l1())


@pytest.fixture
def square():
    return HullModel([(0, 0), (1, 0), (0, 1), (1, 1)], MetricKind.l1())


@pytest.fixture
def square_linf():
    return HullModel([(0, 0), (1, 0), (0, 1), (1, 1)], MetricKind.linf())


@pytest.fixture
def line():
    return HullModel([(0,), (2,)], MetricKind.l1())


@pytest.fixture
def twochain():
    return SemilatticeModel.from_order(["a", "b"], [("a", "b")])


@pytest.fixture
def antichain():
    return SemilatticeModel.from_order(["bot", "u", "v"], [("bot", "u"), ("bot", "v")])


@pytest.fixture
def chain_table(twochain):
    return TableModel.from_model(twochain, [F(0), F(1, 3), F(1, 2), F(2, 3), F(1)])


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for key in sorted(results, key=lambda k: int(k.split("-")[1])):
            terminalreporter.write_line(results[key])
