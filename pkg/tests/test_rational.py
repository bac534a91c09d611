"""Tests for transfer-function evaluation, stability, peak gain, and simulation."""

import cmath
import math

import numpy as np
import pytest

from ozfcert.metrics import SampleSignal
from ozfcert.rational import (
    CONTINUOUS,
    DISCRETE,
    DomainMismatch,
    FrequencyGrid,
    PoleOnBoundary,
    RationalTransferFunction,
    benchmark_continuous_plant,
    benchmark_plant,
    dc_gain,
    eval_at,
    hinf_on_grid,
    hinf_refined,
    is_stable,
    one_plus,
    poles,
    sensitivity,
    simulate_lti,
    tf_from_json,
    tf_to_json,
)

CONSTANT_ONE = RationalTransferFunction(DISCRETE, (1.0,), (1.0,))


def bench_oracle(g, w):
    """Benchmark plant response from the closed-form expression."""
    z = cmath.exp(1j * w)
    return g * (2 * z + 0.92) / (z * z - 0.5 * z)


def test_construction_validation():
    with pytest.raises(ValueError):
        RationalTransferFunction(DISCRETE, (), (1.0,))
    with pytest.raises(ValueError):
        RationalTransferFunction(DISCRETE, (1.0,), ())
    with pytest.raises(ValueError):
        RationalTransferFunction(DISCRETE, (1.0,), (0.0, 1.0))
    with pytest.raises(ValueError):
        RationalTransferFunction(DISCRETE, (1.0, 2.0), (1.0,))  # improper
    with pytest.raises(ValueError):
        RationalTransferFunction("laplace", (1.0,), (1.0,))
    # leading numerator zeros are trimmed, restoring properness
    tf = RationalTransferFunction(DISCRETE, (0.0, 0.0, 1.0), (1.0, 0.5))
    assert tf.num == (1.0,)
    assert tf.strictly_proper


def test_eval_dc_value():
    assert eval_at(benchmark_plant(1.0), 0.0) == pytest.approx(5.84 + 0j)
    assert dc_gain(benchmark_plant(0.8)) == pytest.approx(4.672, rel=1e-12)


def test_eval_constant_identity():
    for w in (0.0, 1.0, np.pi):
        assert eval_at(CONSTANT_ONE, w) == 1.0 + 0j


def test_eval_matches_closed_form_and_is_vectorized():
    tf = benchmark_plant(1.0)
    w = np.linspace(0.0, np.pi, 257)
    values = eval_at(tf, w)
    oracle = np.array([bench_oracle(1.0, wi) for wi in w])
    np.testing.assert_allclose(values, oracle, rtol=1e-13)


def test_eval_angle_of_one_plus_g_at_two_thirds_pi():
    value = 1.0 + eval_at(benchmark_plant(1.0), 2.0 * np.pi / 3.0)
    expected = -math.pi + math.atan(31.0 * math.sqrt(3.0) / 48.0)
    assert cmath.phase(value) == pytest.approx(expected, abs=1e-12)


def test_eval_conjugate_symmetry():
    rng = np.random.default_rng(5)
    for _ in range(20):
        den = np.r_[1.0, rng.uniform(-0.4, 0.4, size=2)]
        num = rng.normal(size=3)
        tf = RationalTransferFunction(DISCRETE, tuple(num), tuple(den))
        w = rng.uniform(0, np.pi, size=16)
        np.testing.assert_allclose(
            eval_at(tf, -w), np.conj(eval_at(tf, w)), rtol=1e-14, atol=1e-14
        )


def test_eval_pole_on_boundary():
    tf = RationalTransferFunction(DISCRETE, (1.0,), (1.0, -1.0))  # pole at z = 1
    with pytest.raises(PoleOnBoundary):
        eval_at(tf, 0.0)
    tf_c = RationalTransferFunction(CONTINUOUS, (1.0,), (1.0, 0.0))  # pole at s = 0
    with pytest.raises(PoleOnBoundary):
        eval_at(tf_c, 0.0)


def test_stability_discrete():
    assert is_stable(benchmark_plant(1.0))  # poles 0 and 0.5
    assert not is_stable(RationalTransferFunction(DISCRETE, (1.0,), (1.0, -1.0)))
    assert not is_stable(RationalTransferFunction(DISCRETE, (1.0,), (1.0, 0.0, -1.1)))
    assert is_stable(CONSTANT_ONE)  # degree-0 denominator, no poles


def test_stability_continuous_benchmark():
    tf = benchmark_continuous_plant()
    assert tf.den == (1.0, 100.1, 11.0, 100.0)
    # root oracle: (s^2 + 0.1 s + 1)(s + 100) has roots -100 and -0.05 +- j sqrt(0.9975)
    expected = sorted([-100.0, -0.05, -0.05])
    assert sorted(np.roots(tf.den).real) == pytest.approx(expected, abs=1e-9)
    assert is_stable(tf)
    assert not is_stable(RationalTransferFunction(CONTINUOUS, (1.0,), (1.0, -1.0)))
    assert not is_stable(RationalTransferFunction(CONTINUOUS, (1.0,), (1.0, 0.0)))


def test_poles_of_constant():
    assert poles(CONSTANT_ONE).size == 0


def test_one_plus_and_sensitivity_polynomials():
    tf = benchmark_plant(1.0)
    shifted = one_plus(tf)
    assert shifted.num == (1.0, 1.5, 0.92)
    assert shifted.den == (1.0, -0.5, 0.0)
    sens = sensitivity(tf)
    assert sens.num == (1.0, -0.5, 0.0)
    assert sens.den == (1.0, 1.5, 0.92)
    w = 1.234
    assert eval_at(sens, w) == pytest.approx(1.0 / (1.0 + bench_oracle(1.0, w)), rel=1e-12)


def test_grid_construction():
    grid = FrequencyGrid.uniform(1024)
    assert len(grid) == 1024
    assert grid.points[0] == 0.0
    assert grid.points[-1] == pytest.approx(np.pi, abs=1e-15)
    log_grid = FrequencyGrid.log_spaced(1e-3, 1e4, 100)
    assert log_grid.points[0] == 0.0
    assert np.all(np.diff(log_grid.points) > 0)
    with pytest.raises(ValueError):
        FrequencyGrid.uniform(1)
    with pytest.raises(ValueError):
        FrequencyGrid.log_spaced(0.0, 1.0, 10)
    with pytest.raises(ValueError):
        FrequencyGrid(DISCRETE, np.array([0.0, 0.5]))  # does not reach pi
    with pytest.raises(ValueError):
        FrequencyGrid(CONTINUOUS, np.array([1.0, 1.0]))  # not strictly increasing


def test_hinf_discrete_sensitivity_reference():
    peak = hinf_on_grid(sensitivity(benchmark_plant(1.0)), FrequencyGrid.uniform())
    assert peak.value == pytest.approx(28.589175522290468, rel=1e-9)
    assert abs(peak.value - 28.58) / 28.58 < 0.005
    assert peak.frequency == pytest.approx(2.4698905667, rel=1e-6)


def test_hinf_continuous_sensitivity_reference():
    peak = hinf_refined(
        sensitivity(benchmark_continuous_plant()),
        FrequencyGrid.log_spaced(1e-3, 1e4, 2**17),
    )
    assert peak.value == pytest.approx(311.35465229, rel=1e-8)
    assert abs(peak.value - 311.35) / 311.35 < 0.005
    assert peak.frequency == pytest.approx(3.1750427, rel=1e-5)


def test_hinf_constant_gain():
    tf = RationalTransferFunction(DISCRETE, (-2.5,), (1.0,))
    assert hinf_on_grid(tf, FrequencyGrid.uniform(64)).value == 2.5


def test_hinf_monotone_under_refinement():
    tf = sensitivity(benchmark_plant(1.0))
    previous = 0.0
    for size in (64, 127, 253, 505, 1009):
        value = hinf_on_grid(tf, FrequencyGrid.uniform(size)).value
        assert value >= previous
        previous = value
    refined = hinf_refined(tf, FrequencyGrid.uniform(1009))
    assert refined.value >= previous


def test_hinf_requires_stability_and_matching_domain():
    unstable = RationalTransferFunction(DISCRETE, (1.0,), (1.0, -1.5))
    with pytest.raises(ValueError):
        hinf_on_grid(unstable, FrequencyGrid.uniform(64))
    with pytest.raises(DomainMismatch):
        hinf_on_grid(benchmark_plant(1.0), FrequencyGrid.log_spaced(0.1, 10, 16))


def test_simulate_zero_input():
    out = simulate_lti(benchmark_plant(1.0), np.zeros(64))
    assert np.all(out.samples == 0.0)


def test_simulate_impulse_response():
    impulse = np.zeros(12)
    impulse[0] = 1.0
    h = simulate_lti(benchmark_plant(1.0), impulse).samples
    assert h[0] == 0.0
    assert h[1] == pytest.approx(2.0)
    assert h[2] == pytest.approx(1.92)
    assert h[3] == pytest.approx(0.96)
    assert h[4] == pytest.approx(0.48)
    np.testing.assert_allclose(h[3:], 0.5 * h[2:-1], rtol=1e-14)


def test_simulate_step_reaches_dc_gain():
    step = np.ones(300)
    out = simulate_lti(benchmark_plant(0.8), step).samples
    assert abs(out[200] - 4.672) <= 1e-9
    assert abs(out[-1] - 4.672) <= 1e-12


def test_simulate_matches_direct_form_recurrence():
    # y(t) = 0.5 y(t-1) + g (2 u(t-1) + 0.92 u(t-2))
    rng = np.random.default_rng(17)
    u = rng.normal(size=200)
    y = simulate_lti(benchmark_plant(0.7), u).samples
    ref = np.zeros_like(u)
    for t in range(len(u)):
        ref[t] = 0.5 * (ref[t - 1] if t >= 1 else 0.0) + 0.7 * (
            2.0 * (u[t - 1] if t >= 1 else 0.0) + 0.92 * (u[t - 2] if t >= 2 else 0.0)
        )
    np.testing.assert_allclose(y, ref, rtol=1e-12, atol=1e-12)


def test_simulate_linearity():
    rng = np.random.default_rng(3)
    tf = benchmark_plant(1.0)
    u = rng.normal(size=512)
    v = rng.normal(size=512)
    a, b = 1.7, -0.3
    lhs = simulate_lti(tf, a * u + b * v).samples
    rhs = a * simulate_lti(tf, u).samples + b * simulate_lti(tf, v).samples
    scale = np.max(np.abs(rhs))
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12 * scale)


def test_simulate_accepts_signals_and_rejects_continuous():
    sig = SampleSignal(np.ones(8))
    assert simulate_lti(benchmark_plant(1.0), sig).samples.shape == (8,)
    with pytest.raises(DomainMismatch):
        simulate_lti(benchmark_continuous_plant(), np.ones(8))


def test_dft_of_impulse_response_matches_eval():
    n = 4096
    impulse = np.zeros(n)
    impulse[0] = 1.0
    h = simulate_lti(benchmark_plant(1.0), impulse).samples
    spectrum = np.fft.fft(h)
    w = 2.0 * np.pi * np.arange(n) / n
    direct = eval_at(benchmark_plant(1.0), w)
    assert np.max(np.abs(spectrum - direct)) < 1e-6


def test_tf_json_round_trip():
    tf = benchmark_plant(0.6)
    obj = tf_to_json(tf)
    assert obj == {"domain": "discrete", "num": [1.2, 0.552], "den": [1.0, -0.5, 0.0]}
    back = tf_from_json(obj)
    assert back == tf
