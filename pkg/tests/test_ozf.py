"""Tests for FIR multiplier classes, frequency response, and the shorthand grammar."""

import numpy as np
import pytest

from ozfcert.ozf import (
    FirMultiplier,
    MultiplierClass,
    classify,
    format_multiplier,
    freq_response,
    multiplier_from_json,
    multiplier_to_json,
    parse_multiplier,
)
from ozfcert.properties import random_class_member


@pytest.mark.parametrize(
    "m0,taps,expected",
    [
        (1.0, {1: -0.66}, MultiplierClass.MD),
        (1.0, {-1: 0.9}, MultiplierClass.MD_ODD_ONLY),
        (1.0, {}, MultiplierClass.MD),
        (1.0, {2: -1.2}, MultiplierClass.NEITHER),
        (1.0, {1: -0.5, -3: -0.5}, MultiplierClass.MD),  # l1 equals m0: still a member
        (2.0, {1: 1.0, -1: -0.999}, MultiplierClass.MD_ODD_ONLY),
    ],
)
def test_classify(m0, taps, expected):
    assert classify(FirMultiplier(m0, taps)) is expected


def test_classify_scale_invariant():
    rng = np.random.default_rng(8)
    for _ in range(50):
        m = random_class_member(rng)
        for scale in (0.25, 3.0, 157.0):
            scaled = FirMultiplier(scale * m.m0, {l: scale * v for l, v in m.taps})
            assert classify(scaled) is classify(m)


def test_freq_response_values():
    m = FirMultiplier(1.0, {1: -0.66})
    assert freq_response(m, 0.0) == pytest.approx(0.34 + 0j)
    static = FirMultiplier(1.0)
    for w in (0.0, 0.7, np.pi):
        assert freq_response(static, w) == 1.0 + 0j
    anticausal = FirMultiplier(1.0, {-1: 0.9})
    assert freq_response(anticausal, np.pi) == pytest.approx(0.1 + 0j, abs=1e-15)
    # anticausal tap multiplies e^{+j omega}
    w = 0.37
    assert freq_response(anticausal, w) == pytest.approx(1.0 + 0.9 * np.exp(1j * w))


def test_freq_response_conjugate_symmetry_and_vectorization():
    rng = np.random.default_rng(21)
    w = np.linspace(0.0, np.pi, 64)
    for _ in range(20):
        m = random_class_member(rng)
        resp = freq_response(m, w)
        np.testing.assert_allclose(freq_response(m, -w), np.conj(resp), rtol=1e-14, atol=1e-14)


def test_real_part_floor_for_class_members():
    rng = np.random.default_rng(34)
    w = np.linspace(0.0, 2.0 * np.pi, 2048)
    for _ in range(100):
        m = random_class_member(rng)
        assert classify(m) is not MultiplierClass.NEITHER
        floor = m.m0 - m.l1_taps
        assert floor >= -1e-15 * m.m0
        min_re = float(np.min(np.real(freq_response(m, w))))
        assert min_re >= floor - 1e-12 * (m.m0 + m.l1_taps)


def test_multiplier_validation():
    with pytest.raises(ValueError):
        FirMultiplier(0.0, {1: -0.5})
    with pytest.raises(ValueError):
        FirMultiplier(-1.0)
    with pytest.raises(ValueError):
        FirMultiplier(1.0, {0: 0.5})
    with pytest.raises(ValueError):
        FirMultiplier(1.0, ((1, 0.2), (1, 0.3)))  # duplicate lag
    with pytest.raises(ValueError):
        FirMultiplier(1.0, {65: -0.5})
    # cap override
    m = FirMultiplier(1.0, {65: -0.5}, max_lag=128)
    assert m.tap_map == {65: -0.5}
    # zero-valued taps are dropped
    assert FirMultiplier(1.0, {1: 0.0}).taps == ()


def test_parse_multiplier():
    m = parse_multiplier("1|-0.66@+1")
    assert m.m0 == 1.0 and m.tap_map == {1: -0.66}
    assert parse_multiplier("1 | -0.66@+1").tap_map == {1: -0.66}
    assert parse_multiplier("1|").taps == ()
    assert parse_multiplier("1|+0.9@-1").tap_map == {-1: 0.9}
    m = parse_multiplier("2.5|-0.5@+2,-0.25@-3")
    assert m.m0 == 2.5 and m.tap_map == {2: -0.5, -3: -0.25}


@pytest.mark.parametrize(
    "text",
    ["", "1", "x|", "1|0.5", "1|0.5@z", "1|0.5@0", "0|", "-2|-0.5@1"],
)
def test_parse_multiplier_rejects(text):
    with pytest.raises(ValueError):
        parse_multiplier(text)


def test_format_round_trip():
    for text in ("1|", "1|-0.66@+1", "1|+0.9@-1", "2.5|-0.25@-3,-0.5@+2"):
        m = parse_multiplier(text)
        assert parse_multiplier(format_multiplier(m)) == m


def test_json_round_trip():
    m = parse_multiplier("1.5|-0.3@+2,0.1@-1")
    obj = multiplier_to_json(m)
    assert obj == {"m0": 1.5, "taps": [{"lag": -1, "value": 0.1}, {"lag": 2, "value": -0.3}]}
    assert multiplier_from_json(obj) == m
    assert multiplier_from_json({"m0": 2.0}) == FirMultiplier(2.0)
