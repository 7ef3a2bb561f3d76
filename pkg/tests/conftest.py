import numpy as np
import pytest

from qewtopsis import Direction, IndicatorMatrix, RawSupplyData, SupplierSeries


def random_matrix(rng, m=None, n=None, max_m=10, max_n=5):
    m = m or int(rng.integers(2, max_m + 1))
    n = n or int(rng.integers(1, max_n + 1))
    values = rng.random((m, n)) * rng.uniform(0.5, 100, size=n)
    directions = [Direction.MIN if rng.random() < 0.3 else Direction.MAX for _ in range(n)]
    return IndicatorMatrix([f"s{i:03d}" for i in range(m)], values, directions)


def random_supply(rng, m=12, periods=24, zero_rate=0.3):
    suppliers = []
    for i in range(m):
        supply = rng.gamma(2.0, 10.0, periods) * (rng.random(periods) > zero_rate)
        order = rng.gamma(2.0, 10.0, periods)
        suppliers.append(SupplierSeries(f"S{i:03d}", np.round(supply, 3), np.round(order, 3)))
    return RawSupplyData(tuple(suppliers), periods)


@pytest.fixture
def rng():
    return np.random.default_rng(20231015)


@pytest.fixture
def small_matrix():
    values = [
        [4.0, 120.0, 10.0, 3.0],
        [1.0, 80.0, 12.0, -2.0],
        [9.0, 200.0, 6.0, 5.0],
        [2.5, 150.0, 11.0, 0.0],
        [6.0, 40.0, 3.0, 1.5],
    ]
    return IndicatorMatrix(["a", "b", "c", "d", "e"], values, ["min", "max", "max", "max"], ["EV", "S", "L", "T"])


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
