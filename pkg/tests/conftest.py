"""Shared generators for random diagrams and formulas."""

from __future__ import annotations

import random
import sys

import pytest
from hypothesis import strategies as st

from gausscalc.gauss import ArrowDiagram
from gausscalc.randgen import random_diagram, with_move_sites  # noqa: F401  (re-exported for tests)


@st.composite
def gauss_diagrams(draw, max_strands: int = 3, max_arrows: int = 6, n: int | None = None):
    n = n if n is not None else draw(st.integers(1, max_strands))
    k = draw(st.integers(0, max_arrows))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_diagram(random.Random(seed), n, k)


@st.composite
def arrow_diagrams(draw, n: int, max_arrows: int = 3):
    return ArrowDiagram(draw(gauss_diagrams(n=n, max_arrows=max_arrows)).strands)


@pytest.fixture
def rng():
    return random.Random(20240607)


def pytest_terminal_summary(terminalreporter):
    # one line per acceptance criterion, in order
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n][1])
