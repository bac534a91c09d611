"""Randomized invariant checks run by the reproduction report and the test suite.

Each check returns a dict with at least ``passed`` and a worst-case
statistic, so failures are attributable.  Draws are seeded, making report
output reproducible.
"""

from __future__ import annotations

import numpy as np

from .certify import GainCertificate, _quadratic_gamma
from .loop import eval_nonlinearity, saturation
from .metrics import power_seminorm
from .ozf import FirMultiplier, classify, freq_response, MultiplierClass
from .rational import FrequencyGrid, RationalTransferFunction, eval_at, simulate_lti

__all__ = [
    "check_certificate_minimality",
    "check_dft_consistency",
    "check_multiplier_positivity",
    "check_saturation_slopes",
    "check_seminorm_axioms",
    "random_class_member",
]


def random_class_member(rng: np.random.Generator) -> FirMultiplier:
    """Random multiplier satisfying the l1 class bound (never class Neither)."""
    m0 = float(10.0 ** rng.uniform(-1.0, 1.0))
    n_taps = int(rng.integers(0, 7))
    lags = rng.choice(np.r_[-8:0, 1:9], size=n_taps, replace=False) if n_taps else []
    raw = rng.normal(size=n_taps)
    total = np.sum(np.abs(raw))
    if n_taps and total > 0:
        scale = rng.uniform(0.0, 1.0) * m0 / total
        taps = tuple((int(lag), float(v * scale)) for lag, v in zip(lags, raw))
    else:
        taps = ()
    return FirMultiplier(m0, taps)


def check_multiplier_positivity(count: int = 200, grid_points: int = 1024, seed: int = 1001) -> dict:
    """Re{M} >= m0 - sum|g_i| >= 0 on a grid, for random class members."""
    rng = np.random.default_rng(seed)
    w = np.linspace(0.0, np.pi, grid_points)
    worst = np.inf
    for _ in range(count):
        m = random_class_member(rng)
        assert classify(m) is not MultiplierClass.NEITHER
        floor = m.m0 - m.l1_taps
        re = np.real(freq_response(m, w))
        slack = float(np.min(re) - floor)
        worst = min(worst, min(slack, float(np.min(re))))
        tol = 1e-12 * (m.m0 + m.l1_taps)
        if np.min(re) < floor - tol or np.min(re) < -tol:
            return {"passed": False, "count": count, "worst": float(np.min(re))}
    return {"passed": True, "count": count, "worst": float(worst)}


def check_seminorm_axioms(count: int = 200, seed: int = 1002) -> dict:
    """Absolute homogeneity and the triangle inequality of the power estimate."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        n = int(rng.integers(64, 2048))
        y = rng.normal(size=n) * 10.0 ** rng.uniform(-2, 2)
        z = rng.normal(size=n) * 10.0 ** rng.uniform(-2, 2)
        a = float(rng.uniform(-3.0, 3.0))
        p_y, p_z = power_seminorm(y), power_seminorm(z)
        homo_err = abs(power_seminorm(a * y) - abs(a) * p_y)
        tri_excess = power_seminorm(y + z) - (p_y + p_z)
        scale = max(p_y, p_z, 1e-30)
        worst = max(worst, homo_err / scale, tri_excess / scale)
        if homo_err > 1e-12 * scale or tri_excess > 1e-12 * scale:
            return {"passed": False, "count": count, "worst": float(worst)}
    return {"passed": True, "count": count, "worst": float(worst)}


def check_saturation_slopes(count: int = 10000, seed: int = 1003) -> dict:
    """Chord slopes of the saturation stay in [0, 1] on random pairs."""
    rng = np.random.default_rng(seed)
    phi = saturation()
    x1 = rng.uniform(-3.0, 3.0, size=count)
    x2 = rng.uniform(-3.0, 3.0, size=count)
    keep = x1 != x2
    x1, x2 = x1[keep], x2[keep]
    q = (eval_nonlinearity(phi, x1) - eval_nonlinearity(phi, x2)) / (x1 - x2)
    return {
        "passed": bool(np.all(q >= 0.0) and np.all(q <= 1.0)),
        "count": int(x1.size),
        "min_slope": float(np.min(q)),
        "max_slope": float(np.max(q)),
    }


def check_certificate_minimality(
    cert: GainCertificate,
    plant: RationalTransferFunction,
    grid: FrequencyGrid,
    deflation: float = 1e-3,
) -> dict:
    """The certified inequality holds just above gamma and fails just below.

    Certificates clamped at gamma = 1 have nothing to verify below.
    """
    m_values = freq_response(cert.multiplier, grid.points)
    g_values = eval_at(plant, grid.points)
    a, b, c = _quadratic_gamma(m_values, g_values, cert.slope_bound)
    inflated = cert.gamma * (1.0 + 1e-9)
    above = float(np.min(a * inflated**2 - b * inflated - c))
    result = {"passed": above > 0.0, "margin_above": above}
    if cert.gamma > 1.0:
        deflated = cert.gamma * (1.0 - deflation)
        below = float(np.min(a * deflated**2 - b * deflated - c))
        result["margin_below"] = below
        result["passed"] = bool(result["passed"] and below <= 0.0)
    return result


def check_dft_consistency(tf: RationalTransferFunction, log2_length: int = 12, tol: float = 1e-6) -> dict:
    """DFT of a truncated impulse response matches the frequency response.

    For a stable transfer function the truncation tail is negligible at
    length 2^12, so the DFT of the simulated impulse response must agree
    with direct evaluation on the matching grid within ``tol``.
    """
    n = 2**log2_length
    impulse = np.zeros(n)
    impulse[0] = 1.0
    h = simulate_lti(tf, impulse).samples
    spectrum = np.fft.fft(h)
    w = 2.0 * np.pi * np.arange(n) / n
    direct = eval_at(tf, w)
    err = float(np.max(np.abs(spectrum - direct)))
    return {"passed": err <= tol, "max_error": err, "length": n}
