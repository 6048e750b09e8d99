import numpy as np
import pytest

from abcttb.core import LexTree, PairedComparison


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def tree(order, signs):
    return LexTree(tuple(order), tuple(signs))


def pair(diffs, outcome):
    return PairedComparison(tuple(diffs), outcome)


# One line per acceptance criterion, echoed in the terminal summary.
CRITERIA = []


def record_criterion(label, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} {label}: {detail}"
    CRITERIA.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
