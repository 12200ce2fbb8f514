import numpy as np
import pytest

from l1prominence import all_pairs_shortest, build_graph, symmetry_constant

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.skipped):
        return
    mark = _criteria_marks.get(report.nodeid)
    if mark is None:
        return
    outcome = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    _criteria[report.nodeid] = (mark, outcome)


_criteria_marks = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criteria_marks[item.nodeid] = m.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (number, text), outcome in sorted(_criteria.values(), key=lambda t: str(t[0][0])):
        terminalreporter.write_line(f"[{outcome}] criterion {number}: {text}")


@pytest.fixture
def cycle3():
    """a->b (1), b->c (1), c->a (10), unit multiplicities."""
    g = build_graph("abc", [1, 1, 1], [("a", "b", 1), ("b", "c", 1), ("c", "a", 10)])
    D = all_pairs_shortest(g)
    return g, D, symmetry_constant(D)


@pytest.fixture
def pair():
    """d(a,b) = 1, d(b,a) = 2."""
    g = build_graph("ab", [1, 1], [("a", "b", 1), ("b", "a", 2)])
    D = all_pairs_shortest(g)
    return g, D, symmetry_constant(D)

