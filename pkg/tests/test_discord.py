import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superdiscord import discord, states, weakmeas
from superdiscord.discord import OptimizerConfig, OptimizerError
from superdiscord.states import XStateParams
from tests.conftest import FIG1A, FIG1B, strict_params
from tests.test_weakmeas import F_EIG_GOLDEN, F_PAPER_GOLDEN

ZERO = XStateParams(0.0, 0.0, 0.0, 0.0)
# 30-digit references (independent mpmath evaluation of the entropies involved)
S_AB_FIG1B = 1.5897810293426857254034897848
S_B_FIG1B = 0.97095059445466863899807606312
QD_FIG1A = 0.12570350351112011224313820951
QD_FIG1B = 0.12709013216324340791582255332
MI_FIG1A = 0.36553600054915451950978946741


# optimizer

def test_constant_objective():
    d, v = discord.minimize_over_sphere(lambda d: 0.7)
    assert v == 0.7
    assert d.z3 >= 0


def test_equator_minimum():
    d, v = discord.minimize_over_sphere(lambda d: d.z3**2)
    assert v <= 1e-10
    assert abs(d.z3) <= 1e-5


def test_off_grid_minimum_is_refined():
    target = weakmeas.MeasurementDirection.from_vector([0.31, -0.52, 0.7937])
    tv = target.as_array()
    d, v = discord.minimize_over_sphere(lambda d: 1 - float(np.dot(d.as_array(), tv)) ** 2)
    assert v <= 1e-10
    assert abs(abs(np.dot(d.as_array(), tv)) - 1) < 1e-9


def test_batch_and_pointwise_agree():
    batch = discord.weak_entropy_batch(FIG1B, 1.0)
    single = discord._single(batch)
    d1, v1 = discord.minimize_over_sphere(single, batch=batch)
    d2, v2 = discord.minimize_over_sphere(single)
    assert v1 == v2 and d1 == d2


def test_non_finite_objective_names_direction():
    with pytest.raises(OptimizerError) as err:
        discord.minimize_over_sphere(lambda d: math.nan if d.z3 < 0.5 else 1.0)
    assert len(tuple(err.value.direction)) == 3


def test_unbiased_state_minimum_at_pole():
    d, _ = discord.minimize_over_sphere(lambda d: weakmeas.weak_conditional_entropy_def(FIG1A, 1.0, d))
    assert abs(d.z3) == pytest.approx(1.0, abs=1e-9)


def test_parallel_grid_is_identical():
    serial = discord.sqd_oracle(FIG1B, 1.0, OptimizerConfig(workers=1))
    threaded = discord.sqd_oracle(FIG1B, 1.0, OptimizerConfig(workers=4))
    assert serial == threaded


def test_random_restarts_do_not_hurt():
    base, _ = discord.qd_oracle(FIG1B)
    more, _ = discord.qd_oracle(FIG1B, OptimizerConfig(random_restarts=3, seed=5))
    assert more <= base + 1e-15


@pytest.mark.parametrize("kw", [dict(polar_steps=10), dict(azimuth_steps=20), dict(refine_tolerance=0), dict(workers=0)])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        OptimizerConfig(**kw)


# closed forms

def test_min_weak_entropy_zero_strength():
    for q in (FIG1A, FIG1B, XStateParams(-0.1, 0.1, -0.2, 0.5)):
        assert discord.min_weak_entropy_closed(q, 0.0) == pytest.approx(1.0, abs=1e-15)


def test_min_weak_entropy_unbiased_is_binary_form():
    t = math.tanh(1.0)
    p = (1 + 0.56 * t) / 2
    h = -p * math.log2(p) - (1 - p) * math.log2(1 - p)
    assert discord.min_weak_entropy_closed(FIG1A, 1.0) == pytest.approx(h, abs=1e-14)


def test_min_weak_entropy_golden():
    assert discord.min_weak_entropy_closed(FIG1B, 1.0) == pytest.approx(F_PAPER_GOLDEN, abs=1e-14)


def test_sqd_paper_examples():
    assert discord.sqd_paper_closed(ZERO, 1.0) == pytest.approx(0.0, abs=1e-15)
    assert discord.sqd_paper_closed(FIG1B, 0.0) == pytest.approx(1 + S_B_FIG1B - S_AB_FIG1B, abs=1e-14)
    assert discord.sqd_paper_closed(FIG1B, 1.0) == pytest.approx(F_PAPER_GOLDEN + S_B_FIG1B - S_AB_FIG1B, abs=1e-14)


def test_sqd_paper_decreasing_for_unbiased_state():
    vals = [discord.sqd_paper_closed(FIG1A, x) for x in np.linspace(0, 5, 51)]
    assert np.all(np.diff(vals) < 0)


def test_sqd_eig_closed_matches_oracle():
    assert discord.sqd_eig_closed(FIG1B, 1.0) == pytest.approx(F_EIG_GOLDEN + S_B_FIG1B - S_AB_FIG1B, abs=1e-14)
    assert discord.sqd_oracle(FIG1B, 1.0)[0] == pytest.approx(discord.sqd_eig_closed(FIG1B, 1.0), abs=1e-9)


def test_qd_closed_examples():
    value, brk = discord.qd_closed(ZERO)
    assert value == pytest.approx(0.0, abs=1e-15)
    assert (brk.s1, brk.s2, brk.s3) == pytest.approx((1.0, 1.0, 1.0))
    assert discord.qd_closed(FIG1A)[0] == pytest.approx(QD_FIG1A, abs=1e-14)
    assert discord.qd_closed(FIG1B)[0] == pytest.approx(QD_FIG1B, abs=1e-14)


# oracles

def test_oracles_vanish_on_maximally_mixed_state():
    assert discord.sqd_oracle(ZERO, 1.0)[0] == 0.0
    assert discord.qd_oracle(ZERO)[0] == 0.0


@pytest.mark.parametrize("q, expected", [(FIG1A, QD_FIG1A), (FIG1B, QD_FIG1B)])
def test_qd_oracle_values(q, expected):
    value, d = discord.qd_oracle(q)
    assert value == pytest.approx(expected, abs=1e-9)
    assert d.z3 == pytest.approx(1.0, abs=1e-6)


def test_unbiased_oracle_matches_closed_form():
    for x in (0.0, 0.5, 1.0, 3.0):
        assert discord.sqd_oracle(FIG1A, x)[0] == pytest.approx(discord.sqd_paper_closed(FIG1A, x), abs=1e-6)


def test_strong_limit_matches_projective():
    assert discord.sqd_oracle(FIG1B, 20.0)[0] == pytest.approx(discord.qd_oracle(FIG1B)[0], abs=1e-6)


@settings(max_examples=25, deadline=None)
@given(strict_params())
def test_closed_discord_never_below_oracle(q):
    assert discord.qd_closed(q)[0] >= discord.qd_oracle(q)[0] - 1e-9


@settings(max_examples=25, deadline=None)
@given(strict_params(), st.sampled_from([0.5, 1.0, 2.0]))
def test_weak_discord_exceeds_projective(q, x):
    assert discord.sqd_oracle(q, x)[0] >= discord.qd_oracle(q)[0] - 1e-9


def test_biased_closed_form_differs_from_oracle():
    # the four-term pairing underestimates the minimum entropy when s != 0
    for x in (1.0, 3.0, 5.0):
        gap = discord.sqd_oracle(FIG1B, x)[0] - discord.sqd_paper_closed(FIG1B, x)
        assert gap == pytest.approx(weakmeas.pairing_residual(0.2, x), abs=1e-9)
    assert discord.sqd_paper_closed(FIG1B, 5.0) < discord.qd_closed(FIG1B)[0]


# total and classical correlations

def test_mutual_information():
    assert discord.mutual_information(ZERO) == pytest.approx(0.0, abs=1e-15)
    assert discord.mutual_information(FIG1A) == pytest.approx(MI_FIG1A, abs=1e-14)
    assert discord.mutual_information_matrix(FIG1B) == pytest.approx(discord.mutual_information(FIG1B), abs=1e-13)


def test_classical_correlation():
    assert discord.classical_correlation(ZERO) == 0.0
    assert discord.classical_correlation(XStateParams(0.2, 0, 0, 0)) == pytest.approx(0.0, abs=1e-12)
    cc = discord.classical_correlation(FIG1A)
    assert cc == pytest.approx(MI_FIG1A - QD_FIG1A, abs=1e-9)


def test_mutual_information_bounds_discord(rng):
    for _ in range(10):
        q = states.sample_params(rng)
        assert discord.mutual_information(q) >= discord.qd_oracle(q)[0] - 1e-9


def test_correlation_report():
    rep = discord.correlation_report(FIG1B, 1.0)
    d = rep.to_dict()
    assert set(d) >= {"mutual_information", "qd_closed", "qd_oracle", "sqd_paper", "sqd_oracle", "paper_residual"}
    assert rep.paper_residual == pytest.approx(rep.sqd_oracle - rep.sqd_paper)
    assert len(d["argmin_direction"]) == 3


def test_audit_discrepancy():
    rep = discord.audit_discrepancy(FIG1B, [0.0, 1.0, 5.0])
    assert rep.max_residual_mismatch() < 1e-12
    assert rep.rows[0].difference == pytest.approx(0.0, abs=1e-9)
    expected = 0.2 * math.tanh(5) * math.log2((1 + 0.2 * math.tanh(5)) / (1 - 0.2 * math.tanh(5)))
    assert rep.rows[-1].difference == pytest.approx(expected, abs=1e-6)
    assert discord.audit_discrepancy(FIG1A, [0.5, 2.0]).max_abs_difference() < 1e-6


def test_tiny_negative_values_clamped():
    assert discord._clamp(-1e-12, "x") == 0.0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert discord._clamp(-1e-3, "x") == -1e-3
    assert caught and issubclass(caught[0].category, RuntimeWarning)
