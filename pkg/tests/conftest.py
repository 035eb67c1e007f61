import sys

import numpy as np
import pytest

import oracles
from posetdyn.catalog import load_fixture
from posetdyn.labelings import induced_restriction


class Plain:
    """A fixture seen through the oracle lens: plain elements, covers, relation
    set and restriction dict."""

    def __init__(self, P, R):
        self.P, self.R = P, R
        self.elements = list(P.elements)
        self.covers = [tuple(c) for c in P.covers]
        self.less = oracles.strict_less(self.elements, self.covers)
        self.Rd = {p: list(R[p]) for p in self.elements} if R is not None else None


def fixture_pair(name):
    doc = load_fixture(name)
    R = doc.restriction
    if R is None and doc.q is not None:
        R = induced_restriction(doc.poset, doc.q)
    return doc, R


@pytest.fixture
def plain():
    def make(P, R=None):
        return Plain(P, R)
    return make


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    lines = getattr(sys.modules.get("test_acceptance"), "LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
