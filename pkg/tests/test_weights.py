import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tanbundle import weights as wt
from tanbundle.errors import DomainError, WeightValidityError

ALL = {
    "cheeger_gromoll": wt.cheeger_gromoll(),
    "almost_kaehler": wt.almost_kaehler(),
    "flat": wt.flat(),
    "constant": wt.constant(2.5),
    "integrable_0_1": wt.integrable(0.0, 1.0),
    "integrable_1_1": wt.integrable(1.0, 1.0),
    "integrable_1_2": wt.integrable(1.0, 2.0),
}


def test_cheeger_gromoll_at_zero():
    assert wt.eval_weight(wt.cheeger_gromoll(), 0.0) == (1.0, -2.0, 8.0)


@pytest.mark.parametrize("name", ["almost_kaehler", "flat"])
def test_normalised_presets(name):
    assert wt.eval_weight(wt.preset(name), 0.0)[0] == pytest.approx(1.0, abs=1e-15)


def test_negative_t_is_a_domain_error():
    with pytest.raises(DomainError):
        wt.eval_weight(wt.flat(), -0.1)


def test_nonpositive_weight_rejected():
    bad = wt.WeightFunction("bad", lambda t: (1.0 - t, -1.0, 0.0))
    with pytest.raises(WeightValidityError):
        wt.eval_weight(bad, 2.0)


@pytest.mark.parametrize("c,k", [(-1.0, 1.0), (0.0, 0.0), (1.0, -2.0)])
def test_integrable_parameter_checks(c, k):
    with pytest.raises(ValueError):
        wt.integrable(c, k)


def test_unknown_preset():
    with pytest.raises(ValueError):
        wt.preset("sasaki")


@pytest.mark.parametrize("name", list(ALL))
def test_closed_derivatives_match_finite_differences(name):
    w = ALL[name]
    h = 1e-4
    ts = np.random.default_rng(7).uniform(0.01, 10.0, 100)
    for t in ts:
        a, da, d2a = wt.eval_weight(w, t)
        f = lambda s: wt.eval_weight(w, s)[0]  # noqa: E731
        fd1 = (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12 * h)
        g = lambda s: wt.eval_weight(w, s)[1]  # noqa: E731
        fd2 = (-g(t + 2 * h) + 8 * g(t + h) - 8 * g(t - h) + g(t - 2 * h)) / (12 * h)
        assert da == pytest.approx(fd1, rel=1e-6, abs=1e-12)
        assert d2a == pytest.approx(fd2, rel=1e-6, abs=1e-12)


@pytest.mark.parametrize("t", [0.0, 0.3, 1.0, 4.0])
def test_L_values(t):
    assert wt.L_of(wt.constant(3.0), t) == 0.0
    assert wt.L_of(wt.flat(), t) == pytest.approx(1.0 / (1.0 + wt.r_of(t)), rel=1e-14)
    assert wt.dL_of(wt.constant(3.0), t) == 0.0


def test_L_cheeger_gromoll_at_zero():
    assert wt.L_of(wt.cheeger_gromoll(), 0.0) == -1.0


def test_f_coefficients_hand_values():
    assert wt.f_coeffs(wt.cheeger_gromoll(), 0.0)[1] == pytest.approx(-3.0)
    assert wt.f_coeffs(wt.constant(1.0), 0.0) == pytest.approx((0.0, -1.0, 1.0))


def test_flat_f_coefficients_vanish():
    for t in np.linspace(0.0, 10.0, 201):
        assert max(abs(f) for f in wt.f_coeffs(wt.flat(), t)) <= 1e-10


def test_almost_kaehler_residual():
    for t in np.linspace(0.0, 10.0, 101):
        assert abs(wt.almost_kaehler_residual(wt.almost_kaehler(), t)) <= 1e-10
    assert wt.almost_kaehler_residual(wt.cheeger_gromoll(), 0.0) == pytest.approx(-2.5)
    assert wt.almost_kaehler_residual(wt.constant(4.0), 0.0) == pytest.approx(-0.5)


@pytest.mark.parametrize("c,k", [(0.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.5, 3.0)])
def test_integrable_obstruction_is_c(c, k):
    vals = [wt.kaehler_obstruction(wt.integrable(c, k), t) for t in np.linspace(0.0, 5.0, 101)]
    assert wt.spread(vals) <= 1e-8
    assert vals[0] == pytest.approx(c, abs=1e-8)


def test_obstruction_hand_value_and_nonconstancy():
    assert wt.kaehler_obstruction(wt.constant(1.0), 0.0) == pytest.approx(0.5)
    vals = [wt.kaehler_obstruction(wt.almost_kaehler(), t) for t in np.linspace(0.0, 5.0, 101)]
    assert wt.spread(vals) > 0.1


def test_scal_ode_lhs_constant_weight_value():
    assert wt.scal_ode_lhs(wt.constant(1.0), 0.0, 2, 0.0) == pytest.approx(2.0)


def test_scal_ode_flat_constant_and_cg_not():
    ts = np.linspace(0.0, 5.0, 100)
    flat = [wt.scal_ode_lhs(wt.flat(), 0.0, 2, t) for t in ts]
    assert wt.spread(flat) <= 1e-8
    assert flat[0] == pytest.approx(flat[-1], abs=1e-8)
    cg = [wt.scal_ode_lhs(wt.cheeger_gromoll(), 1.0, 2, t) for t in ts]
    assert wt.spread(cg) > 0.01


@given(st.floats(0.0, 50.0))
@settings(max_examples=60, deadline=None)
def test_weights_stay_positive(t):
    for w in ALL.values():
        assert wt.eval_weight(w, t)[0] > 0


@given(st.floats(0.0, 20.0), st.floats(0.1, 10.0))
@settings(max_examples=60, deadline=None)
def test_constant_weight_scaling(t, k):
    """F-coefficients depend only on log-derivatives, so scaling a leaves them unchanged."""
    base = wt.f_coeffs(wt.constant(1.0), t)
    np.testing.assert_allclose(wt.f_coeffs(wt.constant(k), t), base, rtol=1e-12)
    assert wt.r_of(t) == pytest.approx(math.sqrt(1 + 2 * t))
