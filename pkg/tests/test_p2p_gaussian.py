import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import HALF_LOG2_2PIE
from feedcap.errors import SolverError
from feedcap.p2p_gaussian import (Arma1Spectrum, DEFAULT_QUAD, QuadratureSpec,
                                  WHITE, ZpkFilter, bode_integral,
                                  entropy_rate, feedback_transform,
                                  grid_capacity_search, instability,
                                  periodic_integral, power_integral,
                                  random_stabilized_filter, rate_integral,
                                  sk_filter, sk_recursion_simulate)


def test_zpk_validation():
    with pytest.raises(ValueError):
        ZpkFilter(zeros=(0.5, 0.2), poles=(1.3,), gain=1.0)  # improper
    with pytest.raises(ValueError):
        ZpkFilter(zeros=(), poles=(1.0,), gain=1.0)          # on the circle
    with pytest.raises(ValueError):
        ZpkFilter(zeros=(), poles=(float("inf"),), gain=1.0)


def test_zpk_response_known_point():
    f = ZpkFilter(zeros=(0.5,), poles=(2.0, 3.0), gain=4.0)
    z = 1.0 + 0.0j
    assert f.response(z) == pytest.approx(4.0 * 0.5 / ((-1.0) * (-2.0)))


def test_spectrum_conventions():
    s = Arma1Spectrum(alpha=0.5, pole_coef=0.2)
    s_lin = Arma1Spectrum(alpha=0.5, pole_coef=0.2, convention="as-written")
    om = np.linspace(-np.pi, np.pi, 7)
    assert np.allclose(s.density(om), s_lin.density(om) ** 2)
    assert np.allclose(WHITE.density(om), 1.0)
    with pytest.raises(ValueError):
        Arma1Spectrum(alpha=1.5, pole_coef=0.0)
    with pytest.raises(ValueError):
        Arma1Spectrum(alpha=0.0, pole_coef=1.0)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(points=63)
    with pytest.raises(ValueError):
        QuadratureSpec(points=100, rule="gauss")
    assert DEFAULT_QUAD.points == 4096


def test_periodic_integral_basics():
    assert periodic_integral(lambda om: np.ones_like(om)) == pytest.approx(1.0)
    assert periodic_integral(np.cos) == pytest.approx(0.0, abs=1e-12)
    assert periodic_integral(
        lambda om: np.cos(om) ** 2) == pytest.approx(0.5, abs=1e-10)


def test_periodic_integral_trapezoid_rule():
    quad = QuadratureSpec(points=512, rule="trapezoid")
    assert periodic_integral(lambda om: np.cos(om) ** 2,
                             quad) == pytest.approx(0.5, abs=1e-10)


def test_sk_filter_chain_single_power():
    f = sk_filter(3.0)
    assert instability(f) == pytest.approx(0.5 * math.log2(4.0), abs=1e-12)
    b = feedback_transform(f)
    # closed-loop pole moves to 1/beta
    assert abs(b.poles[0]) == pytest.approx(0.5, abs=1e-12)
    assert rate_integral(b) == pytest.approx(1.0, abs=1e-6)
    assert power_integral(b) == pytest.approx(3.0, abs=1e-6)
    with pytest.raises(ValueError):
        sk_filter(0.0)


def test_sk_filter_unit_power_closed_form():
    f = sk_filter(1.0)
    root2 = math.sqrt(2.0)
    assert f.poles == (root2 + 0j,)
    assert f.gain == pytest.approx(-1.0 / root2, abs=1e-15)
    assert instability(f) == pytest.approx(0.5, abs=1e-12)
    assert power_integral(feedback_transform(f)) == pytest.approx(1.0,
                                                                  abs=1e-8)


def test_instability_of_stable_filter_is_zero():
    f = ZpkFilter(zeros=(), poles=(0.5, -0.3), gain=2.0)
    assert instability(f) == 0.0


def test_instability_counts_only_unstable_poles():
    f = ZpkFilter(zeros=(0.1, 0.2), poles=(1.5, 0.5, -2.0), gain=1.0)
    assert instability(f) == pytest.approx(math.log2(1.5) + 1.0, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(-0.7, 0.7), st.floats(1.1, 1.9), st.floats(-5.0, 5.0))
def test_feedback_transform_pointwise(zero, pole, gain):
    # B = F / (1 - F) must hold at any probe point off the poles
    if abs(gain) < 1e-3:
        gain = 1.0
    f = ZpkFilter(zeros=(zero,), poles=(pole, 0.3), gain=gain)
    b = feedback_transform(f)
    for z in (0.9 + 0.9j, -1.4 + 0.2j, 2.5 - 1.0j):
        fv = f.response(z)
        assert b.response(z) == pytest.approx(fv / (1.0 - fv), rel=1e-8)


def test_feedback_transform_zero_gain():
    b = feedback_transform(ZpkFilter(zeros=(), poles=(1.4,), gain=0.0))
    assert b.gain == 0.0
    assert power_integral(b) == 0.0
    assert rate_integral(b) == 0.0


def test_bode_requires_closed_loop_stability():
    # tiny gain cannot pull the unstable pole inside the circle
    f = ZpkFilter(zeros=(), poles=(1.4,), gain=1e-6)
    with pytest.raises(SolverError):
        bode_integral(f)


def test_power_integral_requires_stability():
    with pytest.raises(SolverError):
        power_integral(ZpkFilter(zeros=(), poles=(1.4,), gain=1.0))


def test_rate_integrand_singularity_detected():
    # constant B = -1 makes 1 + B vanish identically
    with pytest.raises(SolverError):
        rate_integral(ZpkFilter(zeros=(), poles=(), gain=-1.0))


def test_constant_gain_integrals():
    b = ZpkFilter(zeros=(), poles=(), gain=0.7)
    assert power_integral(b) == pytest.approx(0.49, abs=1e-10)
    assert rate_integral(ZpkFilter(zeros=(), poles=(), gain=0.5)) \
        == pytest.approx(math.log2(1.5), abs=1e-9)
    assert bode_integral(ZpkFilter(zeros=(), poles=(), gain=0.0)) \
        == pytest.approx(0.0, abs=1e-12)


def test_sensitivity_matches_closed_loop_spectrum():
    # |1 + B|^2 from the extracted zpk form equals |1/(1 - F)|^2 pointwise
    rng = np.random.default_rng(12)
    om = np.linspace(-np.pi, np.pi, 64)
    z = np.exp(1j * om)
    for f in (sk_filter(2.0), random_stabilized_filter(rng)):
        b = feedback_transform(f)
        lhs = np.abs(1.0 + b.response(z)) ** 2
        rhs = np.abs(1.0 / (1.0 - f.response(z))) ** 2
        assert np.allclose(lhs, rhs, rtol=1e-10, atol=0.0)


def test_bode_identity_two_pole_example():
    f = ZpkFilter(zeros=(0.5,), poles=(1.3, 1.7), gain=-4.0857)
    assert bode_integral(f) == pytest.approx(math.log2(1.3 * 1.7), abs=2e-6)


def test_random_stabilized_filter_properties():
    rng = np.random.default_rng(8)
    for _ in range(4):
        f = random_stabilized_filter(rng)
        assert instability(f) > 0.0
        b = feedback_transform(f)
        assert max(abs(p) for p in b.poles) < 0.9


def test_entropy_rate_white():
    assert entropy_rate(WHITE) == pytest.approx(HALF_LOG2_2PIE, abs=1e-9)
    assert entropy_rate(WHITE, base="nats") == pytest.approx(
        HALF_LOG2_2PIE * math.log(2.0), abs=1e-9)


def test_entropy_rate_constant_spectrum():
    class Flat:
        def density(self, omega):
            return np.full_like(np.asarray(omega, dtype=float), 2.89)

    assert entropy_rate(Flat()) == pytest.approx(
        HALF_LOG2_2PIE + math.log2(1.7), abs=1e-9)


def test_entropy_rate_arma_szego():
    # both monic minimum-phase factors have zero log integral, so the
    # colored spectrum keeps the white entropy rate
    s = Arma1Spectrum(alpha=0.5, pole_coef=0.2)
    assert entropy_rate(s) == pytest.approx(HALF_LOG2_2PIE, abs=1e-7)


def test_sk_recursion_simulation():
    rep = sk_recursion_simulate(1.0, 25, seed=5, trials=2000)
    assert rep.exponent == pytest.approx(0.5, abs=0.01)
    assert rep.empirical_power == pytest.approx(1.0, rel=0.05)
    assert rep.x_trajectory.shape == (25,)
    # reproducibility
    rep2 = sk_recursion_simulate(1.0, 25, seed=5, trials=2000)
    assert rep2.mse == rep.mse
    with pytest.raises(ValueError):
        sk_recursion_simulate(-1.0, 10, seed=0)


def test_sk_relative_mse_tracks_closed_form():
    # with moderate n the sample relative MSE sits near beta^{-2n}
    rep = sk_recursion_simulate(3.0, 15, seed=2, trials=3000)
    assert rep.relative_mse == pytest.approx(2.0 ** (-30.0), rel=0.2)


def test_sk_noiseless_exact_decay():
    # without noise the error amplitude shrinks by beta^{-2} per step, so
    # the relative MSE ratio between horizons is an exact power of beta
    r5 = sk_recursion_simulate(3.0, 5, seed=1, trials=4, noise_var=0.0)
    r10 = sk_recursion_simulate(3.0, 10, seed=1, trials=4, noise_var=0.0)
    assert r10.relative_mse / r5.relative_mse == pytest.approx(2.0 ** (-20.0),
                                                               rel=1e-9)


def test_grid_search_white_noise_optimum():
    best = grid_capacity_search(WHITE, 1.0)
    assert best.filter.poles[0].real == pytest.approx(1.0 / math.sqrt(2.0),
                                                      abs=0.01)
    assert best.rate == pytest.approx(0.5, abs=0.005)
    assert best.power <= 1.0 + 1e-9


def test_grid_search_fine_grid_tightens_rate():
    # 1e-3 pole resolution around the known optimum pins the rate to 1e-3
    grid = np.arange(0.65, 0.761, 0.001)
    best = grid_capacity_search(WHITE, 1.0, pole_grid=grid)
    assert best.filter.poles[0].real == pytest.approx(1.0 / math.sqrt(2.0),
                                                      abs=0.01)
    assert best.rate == pytest.approx(0.5, abs=1e-3)


def test_grid_search_colored_noise_runs():
    s = Arma1Spectrum(alpha=0.5, pole_coef=0.2)
    best = grid_capacity_search(s, 2.0,
                                pole_grid=np.linspace(0.0, 0.95, 40))
    assert best.rate > 0.0
    assert best.power == pytest.approx(2.0, rel=1e-6)
    # regression value; no closed form for colored-noise capacity in scope
    assert best.rate == pytest.approx(0.6401308460397498, rel=1e-6)
    with pytest.raises(ValueError):
        grid_capacity_search(s, 0.0)


def test_grid_search_moving_average_regression():
    s = Arma1Spectrum(alpha=0.9, pole_coef=0.0)
    best = grid_capacity_search(s, 1.0,
                                pole_grid=np.linspace(0.0, 0.95, 40))
    assert best.rate == pytest.approx(0.1869228140091332, rel=1e-6)
