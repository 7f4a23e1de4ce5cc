from pathlib import Path

import numpy as np
import pytest

from corran.table import ContingencyTable

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


def labeled(counts, prefix=("r", "c")):
    counts = np.asarray(counts, dtype=float)
    a, b = counts.shape
    return ContingencyTable([f"{prefix[0]}{i + 1}" for i in range(a)],
                            [f"{prefix[1]}{j + 1}" for j in range(b)], counts)


def random_tables(seed, n, max_dim=8, low=1, high=100):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        a, b = rng.integers(2, max_dim + 1, size=2)
        yield labeled(rng.integers(low, high + 1, size=(a, b)))


@pytest.fixture
def perfect():
    return ContingencyTable(["A", "B"], ["x", "y"], [[10, 0], [0, 10]])


@pytest.fixture
def uniform():
    return ContingencyTable(["A", "B"], ["x", "y"], [[1, 1], [1, 1]])


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


_criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if report.when == "call" or (report.when == "setup" and report.skipped):
        key = mark.args[0]
        status = "SKIP" if report.skipped else ("PASS" if report.passed else "FAIL")
        prev = _criteria.get(key, (None, mark.args[1]))[0]
        if prev in ("FAIL",):
            status = prev
        _criteria[key] = (status, mark.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria):
        status, title = _criteria[key]
        terminalreporter.write_line(f"[{status}] criterion {key}: {title}")
