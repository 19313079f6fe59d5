import itertools
from fractions import Fraction

import pytest

from braidfan.defcone import BVector
from braidfan.exactgeom import HPolytope, Row


def ex23_p0(b=(1, 2, 1, 2)):
    normals = [(-1, 0), (0, 1), (0, -1), (1, -1)]
    return HPolytope(2, tuple(Row(f"a{i + 1}", n, r) for i, (n, r) in enumerate(zip(normals, b))))


def cube_b():
    """b = 3 on singletons, 4 on pairs, 6 on triples and on [4]."""
    vals = {"": 0}
    for k, v in [(1, 3), (2, 4), (3, 6), (4, 6)]:
        for S in itertools.combinations("1234", k):
            vals["".join(S)] = v
    return BVector("subsets", 3, vals)


@pytest.fixture
def p0():
    return ex23_p0()


@pytest.fixture
def cube():
    return cube_b()


F = Fraction


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    from test_acceptance import ACCEPT_KEY
    lines = config.stash.get(ACCEPT_KEY, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for num in sorted(lines):
            terminalreporter.write_line(lines[num])
