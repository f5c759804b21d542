"""Transfer operator: spec examples, pressure identities, Gibbs machinery."""

import math

import numpy as np
import pytest
from scipy.optimize import brentq

from gauss_spectra import transfer as tr
from gauss_spectra.zeta import (golden_constant, khintchine_exponent,
                                lyapunov_constant, riemann_zeta)

ALPH = tr.Alphabet.full(64)
DISC = tr.Discretization.chebyshev(16)


def P(t, q, alphabet=ALPH, disc=DISC):
    return tr.pressure(tr.PressureParams(t, q), alphabet, disc).value


# ---------------------------------------------------------------------------
# operator application

def test_apply_operator_basel():
    out = tr.apply_operator(tr.PressureParams(1.0, 0.0), ALPH, DISC, np.ones(16))
    assert out[0] == pytest.approx(math.pi ** 2 / 6.0, rel=1e-14)


def test_apply_operator_zeta_constant_in_x():
    out = tr.apply_operator(tr.PressureParams(0.0, -2.0), ALPH, DISC, np.ones(16))
    assert np.max(np.abs(out - riemann_zeta(2.0))) < 1e-12


def test_apply_operator_restricted():
    out = tr.apply_operator(tr.PressureParams(1.0, 0.0),
                            tr.Alphabet.restricted({1, 2}), DISC, np.ones(16))
    assert out[0] == pytest.approx(1.25, rel=1e-14)


def test_apply_operator_domain_and_input_errors():
    with pytest.raises(tr.DomainError):
        tr.apply_operator(tr.PressureParams(0.4, 0.0), ALPH, DISC, np.ones(16))
    with pytest.raises(ValueError):
        tr.apply_operator(tr.PressureParams(1.0, 0.0), ALPH, DISC, np.ones(7))


def test_alphabet_validation():
    with pytest.raises(ValueError):
        tr.Alphabet.full(4)
    with pytest.raises(ValueError):
        tr.Alphabet.restricted([])
    with pytest.raises(ValueError):
        tr.Alphabet.restricted([0, 1])


# ---------------------------------------------------------------------------
# pressure values

def test_pressure_normalization():
    res = tr.pressure(tr.PressureParams(1.0, 0.0), ALPH, DISC)
    assert abs(res.value) < 1e-6
    assert res.iterations > 0
    assert np.all(res.eigenfunction_values > 0.0)
    assert res.left_eigen_weights.sum() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("q", [-1.5, -2.0, -3.0, -4.0])
def test_pressure_boundary_identity(q):
    assert P(0.0, q) == pytest.approx(math.log(riemann_zeta(-q)), abs=1e-6)


def test_pressure_1d_values():
    assert abs(tr.pressure_1d(1.0, ALPH, DISC).value) < 1e-6
    p20 = tr.pressure_1d(20.0, ALPH, DISC).value
    assert abs(p20 + 20.0 * golden_constant()) < 0.01 * 20.0
    p06 = tr.pressure_1d(0.6, ALPH, DISC).value
    assert -0.6 * math.log(4.0) + math.log(riemann_zeta(1.2)) - 1e-9 <= p06
    assert p06 <= math.log(riemann_zeta(1.2)) + 1e-9


def test_pressure_sandwich_with_tail_bound():
    for (t, q) in [(0.8, -0.5), (0.7, -1.0), (1.0, 0.3), (0.55, -2.0)]:
        res = tr.pressure(tr.PressureParams(t, q), ALPH, DISC)
        eps = res.tail_error_bound + 1e-8
        lo = -t * math.log(4.0) + math.log(riemann_zeta(2 * t - q))
        hi = math.log(riemann_zeta(2 * t - q))
        assert lo - eps <= res.value <= hi + eps


def test_pressure_monotone_in_t_and_q():
    ts = np.linspace(0.7, 1.3, 7)
    vals = [P(float(t), -0.5) for t in ts]
    assert np.all(np.diff(vals) < 0.0)
    qs = np.linspace(-2.0, 0.3, 7)
    vals = [P(0.9, float(q)) for q in qs]
    assert np.all(np.diff(vals) > 0.0)


def test_translation_identity():
    # pressure of the expansion-rate family equals the shifted 1-d pressure
    for (t, q) in [(1.3, 0.5), (0.9, -0.4), (2.0, 1.1)]:
        u = t - q
        assert tr.pressure_1d(u, ALPH, DISC).value == pytest.approx(
            P(u, 0.0), abs=1e-10)


def test_discretization_convergence():
    p16 = P(1.0, 0.0, disc=tr.Discretization.chebyshev(16))
    p24 = P(1.0, 0.0, disc=tr.Discretization.chebyshev(24))
    assert abs(p16 - p24) < 1e-8


def test_domain_margin_rejection():
    with pytest.raises(tr.DomainError):
        tr.pressure(tr.PressureParams(0.5, 0.0), ALPH, DISC)
    with pytest.raises(tr.DomainError):
        tr.pressure_1d(0.503, ALPH, DISC)


def test_restricted_pressure_root_matches_reference():
    a12 = tr.Alphabet.restricted({1, 2})
    root = brentq(lambda t: tr.pressure_1d(t, a12, DISC).value, 1e-6, 1.0,
                  xtol=1e-13)
    assert abs(root - 0.5312805) < 1e-5


# ---------------------------------------------------------------------------
# derivatives

def test_derivative_anchors():
    params = tr.PressureParams(1.0, 0.0)
    assert tr.dP_dq(params, ALPH, DISC) == pytest.approx(khintchine_exponent(), abs=1e-3)
    assert tr.dP_dt(params, ALPH, DISC) == pytest.approx(-lyapunov_constant(), abs=1e-3)


def test_dP_dq_matches_zeta_derivative_oracle():
    # at t = 0 the pressure is log zeta(-q); differentiate that directly
    h = 1e-5
    oracle = (math.log(riemann_zeta(3.0 - h)) - math.log(riemann_zeta(3.0 + h))) / (2 * h)
    assert tr.dP_dq(tr.PressureParams(0.0, -3.0), ALPH, DISC) == pytest.approx(
        oracle, abs=1e-6)


def test_dP_dq_increasing_in_q():
    qs = np.linspace(-2.0, 0.5, 8)
    vals = [tr.dP_dq(tr.PressureParams(0.9, float(q)), ALPH, DISC) for q in qs]
    assert np.all(np.diff(vals) > 0.0)


def test_dP_dt_negative_on_grid():
    for t in np.linspace(0.7, 1.1, 5):
        for q in np.linspace(-1.5, 0.2, 5):
            assert tr.dP_dt(tr.PressureParams(float(t), float(q)), ALPH, DISC) < 0.0


def test_derivatives_consistent_with_finite_differences():
    for (t, q) in [(0.75, 0.0), (1.0, 0.0), (0.9, -0.8)]:
        tr.dP_dq(tr.PressureParams(t, q), ALPH, DISC, check=True, check_tol=1e-4)
        tr.dP_dt(tr.PressureParams(t, q), ALPH, DISC, check=True, check_tol=1e-4)


# ---------------------------------------------------------------------------
# Gibbs data and sampling

def test_gibbs_normalization_at_random_points():
    g = tr.gibbs(tr.PressureParams(0.9, 0.3), ALPH, DISC)
    rng = np.random.default_rng(5)
    for x in rng.random(10):
        probs, tail = g.digit_probabilities(float(x))
        assert abs(probs.sum() + tail - 1.0) < 1e-10


def test_gibbs_digit_one_frequency_matches_gauss_measure():
    g = tr.gibbs(tr.PressureParams(1.0, 0.0), ALPH, DISC)
    seq = tr.sample_digits(g, 100_000, seed=2)
    freq = np.mean(np.asarray(seq.digits) == 1)
    assert abs(freq - math.log(4.0 / 3.0) / math.log(2.0)) < 2e-2


def test_sampled_mean_log_digit_matches_gibbs_integral():
    params = tr.PressureParams(0.9, 0.5)
    g = tr.gibbs(params, ALPH, DISC)
    seq = tr.sample_digits(g, 60_000, seed=3)
    logs = np.log(np.asarray(seq.digits, dtype=float))
    target = tr.dP_dq(params, ALPH, DISC)
    sigma = logs.std() / math.sqrt(len(logs))
    assert abs(logs.mean() - target) < 3.0 * sigma + 5e-3


def test_sampling_determinism():
    g = tr.gibbs(tr.PressureParams(1.0, 0.0), ALPH, DISC)
    a = tr.sample_digits(g, 2000, seed=9)
    b = tr.sample_digits(g, 2000, seed=9)
    c = tr.sample_digits(g, 2000, seed=10)
    assert a.digits == b.digits
    assert a.digits != c.digits


def test_restricted_sampling_stays_in_alphabet():
    g = tr.gibbs(tr.PressureParams(0.7, 0.0), tr.Alphabet.restricted({1, 2, 3}), DISC)
    seq = tr.sample_digits(g, 5000, seed=1)
    assert set(seq.digits) <= {1, 2, 3}


# ---------------------------------------------------------------------------
# cylinder-sum oracle

def test_cylinder_sum_estimate_matches_truncated_pressure():
    a64 = tr.Alphabet.restricted(range(1, 65))
    for (t, q) in [(1.0, 0.0), (0.8, 0.1)]:
        p = tr.pressure(tr.PressureParams(t, q), a64, DISC).value
        est = tr.cylinder_sum_estimate(tr.PressureParams(t, q), depth=12)
        assert abs(est.value - p) < 0.02
        # the plain (1/n) mean carries the documented O(1/n) offset
        assert abs(est.raw_mean - p) < 0.2


def test_cylinder_sum_estimate_near_full_pressure_at_fast_decay():
    # digit truncation costs little once 2t - q >= 2
    p = P(1.0, -1.0)
    est = tr.cylinder_sum_estimate(tr.PressureParams(1.0, -1.0), depth=12)
    assert abs(est.value - p) < 0.02


def test_provider_caches_and_agrees_with_module_functions():
    prov = tr.PressureProvider(ALPH, DISC)
    assert prov.pressure(0.9, -0.5) == pytest.approx(P(0.9, -0.5), abs=1e-13)
    assert prov.dP_dq(0.9, -0.5) == pytest.approx(
        tr.dP_dq(tr.PressureParams(0.9, -0.5), ALPH, DISC), abs=1e-12)
    assert prov.dP_dt(0.9, -0.5) == pytest.approx(
        tr.dP_dt(tr.PressureParams(0.9, -0.5), ALPH, DISC), abs=1e-12)
