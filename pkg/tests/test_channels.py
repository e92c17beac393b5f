import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superdiscord import channels, discord, linalg, states
from superdiscord.channels import DephasingParams
from superdiscord.states import XStateParams
from tests.conftest import FIG1B, strict_params
from tests.test_linalg import random_density


@pytest.mark.parametrize("gamma, time, expected", [(2.0, 0.0, 0.0), (0.0, 3.0, 0.0), (1.0, math.log(2), 0.5)])
def test_p_of_time(gamma, time, expected):
    assert channels.p_of_time(gamma, time) == pytest.approx(expected, abs=1e-15)


def test_p_of_time_rejects_negative():
    with pytest.raises(ValueError):
        channels.p_of_time(-1.0, 1.0)


def test_dephasing_params():
    dp = DephasingParams.from_rate(1.0, math.log(2))
    assert dp.p == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(ValueError):
        DephasingParams(1.5)
    with pytest.raises(ValueError):
        DephasingParams(0.2, gamma=1.0)
    with pytest.raises(ValueError):
        DephasingParams(0.2, gamma=1.0, time=1.0)


@pytest.mark.parametrize("p", np.linspace(0, 1, 11))
def test_kraus_sets_complete(p):
    assert linalg.kraus_completeness(channels.single_qubit_kraus(p)) < 1e-15
    assert linalg.kraus_completeness(channels.kraus_phase_flip(p)) < 1e-15


def test_zero_flip_is_identity(rng):
    rho = random_density(rng)
    np.testing.assert_allclose(linalg.apply_kraus(rho, channels.kraus_phase_flip(0.0)), rho, atol=1e-15)


def test_full_flip_removes_coherences():
    out = linalg.apply_kraus(states.to_density_matrix(FIG1B), channels.kraus_phase_flip(1.0))
    np.testing.assert_allclose(out, np.diag(np.diag(out)), atol=1e-15)


def test_sides_commute(rng):
    rho = random_density(rng)
    for p in (0.1, 0.6):
        ab = linalg.apply_kraus(linalg.apply_kraus(rho, channels.kraus_on_a(p)), channels.kraus_on_b(p))
        ba = linalg.apply_kraus(linalg.apply_kraus(rho, channels.kraus_on_b(p)), channels.kraus_on_a(p))
        np.testing.assert_allclose(ab, ba, atol=1e-15)
        np.testing.assert_allclose(ab, linalg.apply_kraus(rho, channels.kraus_phase_flip(p)), atol=1e-15)


def test_evolve_params_examples():
    assert channels.evolve_params(FIG1B, 0.0) == FIG1B
    assert channels.evolve_params(FIG1B, 1.0) == XStateParams(0.2, 0.0, -0.0, 0.56)
    q = channels.evolve_params(FIG1B, 0.5)
    assert q.as_tuple() == pytest.approx((0.2, 0.075, -0.1, 0.56))


@settings(max_examples=100, deadline=None)
@given(strict_params(), st.floats(0, 1))
def test_kraus_matches_parameter_map(q, p):
    out = linalg.apply_kraus(states.to_density_matrix(q), channels.kraus_phase_flip(p))
    np.testing.assert_allclose(out, states.to_density_matrix(channels.evolve_params(q, p)), atol=1e-12)


def test_dephased_closed_reduces_at_zero_flip():
    for x in (0.0, 1.0, 5.0):
        assert channels.sqd_dephased_closed(FIG1B, x, 0.0) == pytest.approx(discord.sqd_paper_closed(FIG1B, x), abs=1e-14)


def test_dephased_closed_full_flip():
    q = XStateParams(0.2, 0.0, 0.0, 0.56)
    assert channels.sqd_dephased_closed(FIG1B, 1.0, 1.0) == pytest.approx(discord.sqd_paper_closed(q, 1.0), abs=1e-14)


def test_dephased_closed_vanishes_on_maximally_mixed():
    assert channels.sqd_dephased_closed(XStateParams(0, 0, 0, 0), 2.0, 0.3) == pytest.approx(0.0, abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(strict_params(), st.floats(0, 5), st.floats(0, 1))
def test_dephased_closed_is_composition(q, x, p):
    assert channels.sqd_dephased_closed(q, x, p) == pytest.approx(channels.sqd_dephased_composed(q, x, p), abs=1e-12)


@pytest.mark.parametrize("x", [1.0, 5.0])
def test_dephased_closed_non_increasing_in_p(x):
    vals = [channels.sqd_dephased_closed(FIG1B, x, p) for p in np.linspace(0, 1, 101)]
    assert np.all(np.diff(vals) <= 1e-12)
