import sys
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from adjunctions.coeff import Poly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def polys(draw, max_degree=8):
    return Poly(draw(st.lists(fractions, max_size=max_degree + 1)))


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def raw_poly(rng, degree):
    """Random rational polynomial built without any package helpers."""
    return Poly([Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10))) for _ in range(degree + 1)])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
