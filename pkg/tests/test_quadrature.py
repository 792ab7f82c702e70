"""Certified-quadrature tests against closed-form integrals.

Every expected value below has an independent derivation:

* ``int_{s0}^inf x e^{2 s0 - 2 x} dx = s0/2 + 1/4`` (integration by parts).
* ``int_0^pi sin = 2``.
* For ``f(t, v) = e^{2 - 2 min(t,v)} e^{-t-v}`` on ``{min(t,v) >= 1}``,
  symmetry in (t, v) gives ``2 e^2 int_1^inf e^{-4t} dt = e^{-2}/2``.
* For ``f(t, v) = e^{2 - 2 min(t,v)} / max(t,v)^3`` the same split gives
  ``e^2 int_1^inf e^{-2t} t^{-2} dt = e^2 E_2(2)`` with the standard
  exponential integral ``E_2``.
"""

import math

import numpy as np
import pytest
from scipy.special import expn

from leafcurrent.quadrature import (
    DecayDescriptor,
    QuadratureError,
    Tolerance,
    exp_tail_moment,
    integrate_1d,
    integrate_2d,
    monte_carlo,
)

TIGHT = Tolerance(rel_tol=1e-10, abs_tol=1e-12, max_evals=2_000_000)
TOL_2D = Tolerance(rel_tol=1e-9, abs_tol=1e-11, max_evals=4_000_000)
EXP_DECAY = DecayDescriptor(exp_rate=1.5, alg_rate=2.5)


@pytest.mark.parametrize("s0", [1.0, 2.0, 10.0])
def test_exponential_moment_closed_form(s0):
    res = integrate_1d(lambda x: x * math.exp(2 * s0 - 2 * x), s0, math.inf, tol=TIGHT)
    assert res.value == pytest.approx(s0 / 2 + 0.25, abs=1e-8)
    assert res.error_estimate < 1e-8


@pytest.mark.parametrize("s0", [1.0, 2.0, 10.0])
def test_exp_tail_moment_helper(s0):
    assert exp_tail_moment(s0, TIGHT) == pytest.approx(s0 / 2 + 0.25, abs=1e-8)


def test_sine_arch():
    res = integrate_1d(math.sin, 0.0, math.pi, tol=TIGHT)
    assert res.value == pytest.approx(2.0, abs=1e-12)


def test_break_points_kink():
    res = integrate_1d(abs, -1.0, 1.0, tol=TIGHT, break_points=[0.0])
    assert res.value == pytest.approx(1.0, abs=1e-12)


def test_cauchy_density_normalizes():
    # int_R  V / (V^2 + (y - U)^2) dy / pi = 1 for any V > 0
    U, V = 0.7, 2.3

    def f(y):
        return V / (V * V + (y - U) ** 2) / math.pi

    res = integrate_1d(f, -math.inf, math.inf, tol=TIGHT, break_points=[U])
    assert res.value == pytest.approx(1.0, abs=1e-9)


def test_2d_exponential_closed_form():
    def f(t, v):
        return np.exp(2.0 - 2.0 * np.minimum(t, v)) * np.exp(-t - v)

    res = integrate_2d(f, 1.0, EXP_DECAY, TOL_2D)
    exact = math.exp(-2.0) / 2.0
    assert res.value == pytest.approx(exact, rel=1e-8)
    assert abs(res.value - exact) <= 10 * max(res.error_estimate, 1e-12)


def test_2d_algebraic_closed_form():
    def f(t, v):
        return np.exp(2.0 - 2.0 * np.minimum(t, v)) / np.maximum(t, v) ** 3

    res = integrate_2d(f, 1.0, DecayDescriptor(exp_rate=1.9, alg_rate=3.0), TOL_2D)
    exact = math.exp(2.0) * expn(2, 2)
    assert res.value == pytest.approx(exact, rel=1e-8)


def test_2d_zero_integrand():
    res = integrate_2d(lambda t, v: np.zeros_like(t), 1.0, EXP_DECAY, TOL_2D)
    assert res.value == 0.0
    assert res.error_estimate == 0.0


def test_2d_error_estimate_covers_tail_truncation():
    # Halving the requested tolerance must not move the value by more than
    # the certified error estimate of the looser run.
    def f(t, v):
        m = np.minimum(t, v)
        return np.exp(2.0 - 2.0 * m) / (1.0 + np.maximum(t, v)) ** 2.5

    loose = integrate_2d(f, 1.0, DecayDescriptor(exp_rate=1.9, alg_rate=2.5), Tolerance(1e-6, 1e-8, 4_000_000))
    tight = integrate_2d(f, 1.0, DecayDescriptor(exp_rate=1.9, alg_rate=2.5), Tolerance(1e-8, 1e-10, 4_000_000))
    assert abs(loose.value - tight.value) <= loose.error_estimate + tight.error_estimate


def test_budget_exhaustion_raises_with_best_estimate():
    def f(t, v):
        return np.exp(2.0 - 2.0 * np.minimum(t, v)) * np.exp(-t - v)

    with pytest.raises(QuadratureError) as exc:
        integrate_2d(f, 1.0, EXP_DECAY, Tolerance(rel_tol=1e-14, abs_tol=1e-16, max_evals=3000))
    best = exc.value.best
    assert best is not None
    assert best.value == pytest.approx(math.exp(-2.0) / 2.0, rel=1e-2)


def test_monte_carlo_mean_and_reproducibility():
    def sampler(rng, n):
        return rng.random(n), rng.random(n)

    res = monte_carlo(lambda x, y: x * y, sampler, 200_000, seed=42)
    assert res.value == pytest.approx(0.25, abs=5 * res.error_estimate)
    assert res.error_estimate < 1e-3
    again = monte_carlo(lambda x, y: x * y, sampler, 200_000, seed=42)
    assert again.value == res.value
    assert again.error_estimate == res.error_estimate
    other = monte_carlo(lambda x, y: x * y, sampler, 200_000, seed=43)
    assert other.value != res.value


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(rel_tol=-1e-8)
    with pytest.raises(ValueError):
        Tolerance(abs_tol=0.0)
    with pytest.raises(ValueError):
        Tolerance(max_evals=10)
    with pytest.raises(ValueError):
        DecayDescriptor(exp_rate=0.0, alg_rate=2.0)
    with pytest.raises(ValueError):
        DecayDescriptor(exp_rate=1.0, alg_rate=1.0)
