import pytest

from flowercode.core import build_code
from flowercode.flower import SubsetJumpPlan
from flowercode.sequences import ChiSequence, DroppingSequence, NodeSequence

TABLE1_NODES = [[1, 5], [1, 2], [2, 3], [1, 3, 4], [2, 4, 5], [3, 5], [1, 4]]
FIG1_BITS = (1, 1, 1, 1, 1, 1, 0, 0, 0, 1, 1, 1, 0, 0, 1, 1, 1)
FIG1_NODE_SEQ = (1, 2, 3, 4, 1, 2, 2, 3, 4, 3, 4, 1)
FIG1_NODES = [[1, 5, 6], [1, 2, 6], [2, 3, 4], [3, 4, 5]]
TABLE3_SUBSETS = ((1, 2, 4), (5, 6, 7, 8), (2, 3, 5, 6, 7))
TABLE5_BITS = (1, 1, 0, 1, 0, 0, 1, 1, 1, 1, 1, 1, 0, 1, 0, 1)


@pytest.fixture
def table1():
    return build_code(TABLE1_NODES, 5)


@pytest.fixture
def fig1_dropping():
    return DroppingSequence(FIG1_BITS, 4, 6)


@pytest.fixture
def fig1_node_seq():
    return NodeSequence(FIG1_NODE_SEQ, 4, 6)


@pytest.fixture
def fig1_code():
    return build_code(FIG1_NODES, 6)


@pytest.fixture
def table3_plan():
    return SubsetJumpPlan(8, 7, TABLE3_SUBSETS)


@pytest.fixture
def table5_chi():
    return ChiSequence(TABLE5_BITS, 4, 5)


_acceptance = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion from the acceptance list")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("acceptance")
    if marker:
        _acceptance.append((marker, report.outcome))


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    m = item.get_closest_marker("acceptance")
    if m:
        item.user_properties.append(("acceptance", f"#{m.args[0]} {m.args[1]}"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"[{'PASS' if outcome == 'passed' else 'FAIL'}] {name}")
