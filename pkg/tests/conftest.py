import numpy as np
import pytest
from hypothesis import strategies as st

from superdiscord.discord import OptimizerConfig
from superdiscord.states import XStateParams, validate

FIG1A = XStateParams(0.0, 0.3, -0.4, 0.56)
FIG1B = XStateParams(0.2, 0.3, -0.4, 0.56)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def cfg():
    return OptimizerConfig()


@st.composite
def strict_params(draw, s_zero=False):
    """X-state parameters inside the strict region, built from ordered magnitudes."""
    unit = st.floats(0.02, 0.98)
    sign = st.sampled_from((-1.0, 1.0))
    c3 = draw(st.floats(0.05, 0.95)) * draw(sign)
    c2 = draw(unit) * abs(c3) * draw(sign)
    c1 = draw(unit) * abs(c2) * draw(sign)
    s = 0.0 if s_zero else draw(unit) * (1 - abs(c3)) * draw(sign)
    q = XStateParams(s, c1, c2, c3)
    mode = "relaxed" if s_zero else "strict"
    from hypothesis import assume

    assume(not validate(q, mode))
    return q


@st.composite
def unit_vectors(draw):
    v = np.array(draw(st.lists(st.floats(-1, 1), min_size=3, max_size=3)))
    from hypothesis import assume

    assume(np.linalg.norm(v) > 0.1)
    return v / np.linalg.norm(v)


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for res in sorted(test_acceptance.RESULTS, key=lambda r: r.number):
            terminalreporter.write_line(res.line())
