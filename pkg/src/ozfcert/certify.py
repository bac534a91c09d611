"""Stability certification of the saturated loop from frequency-domain tests.

The central computation is the per-frequency quadratic inequality

    2 Re[M (1/k + G)] gamma^2 - (|G|^2 + |M|^2) gamma - 2 Re[M] > 0,

which, when it holds at every frequency for some gamma >= 1 and a
multiplier M of class Md or MdOdd, bounds the loop's l2 gain from the
second input to the nonlinearity input by gamma.  A class-Md multiplier
additionally bounds the offset gain (gain measured about steady-state
bias values), so the loop's response to a constant-plus-noise input stays
close to the constant's fixed point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .loop import Nonlinearity, eval_nonlinearity
from .ozf import FirMultiplier, MultiplierClass, classify, freq_response, multiplier_to_json
from .rational import (
    DISCRETE,
    DomainMismatch,
    FrequencyGrid,
    RationalTransferFunction,
    eval_at,
    is_stable,
)

__all__ = [
    "DcOperatingPoint",
    "FrequencyCheck",
    "GainCertificate",
    "InvalidMultiplier",
    "NoBracket",
    "NotFound",
    "NotSuitable",
    "OBSTRUCTION_FREQUENCY",
    "PhaseObstruction",
    "certificate_to_json",
    "circle_criterion",
    "dc_fixed_point",
    "gamma_bound",
    "is_suitable",
    "phase_obstruction",
    "search_one_tap",
]

#: Relative inflation applied to gamma for the post-validation margin check.
POST_CHECK_INFLATION = 1e-9

#: Frequency at which the single-frequency class-Md exclusion rule applies.
OBSTRUCTION_FREQUENCY = 2.0 * np.pi / 3.0


class NotSuitable(ValueError):
    """No finite gain is certified: the quadratic's leading term is not positive everywhere."""

    def __init__(self, message: str, frequency: float | None = None, value: float | None = None):
        super().__init__(message)
        self.frequency = frequency
        self.value = value


class InvalidMultiplier(ValueError):
    """Multiplier is in neither certification class."""


class NoBracket(ValueError):
    """No sign-change bracket for the fixed-point equation within |u| <= 1e6."""


class NotFound(LookupError):
    """No searched multiplier certified a finite gain bound."""


@dataclass(frozen=True)
class FrequencyCheck:
    """Outcome of a pointwise grid test, with the worst grid point."""

    passed: bool
    worst_frequency: float
    worst_value: float

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class GainCertificate:
    """A certified gain bound for one multiplier, plant, and grid.

    ``min_margin`` is the smallest value over the grid of the left side of
    the certified inequality evaluated at gamma * (1 + 1e-9); it is
    positive by construction.  ``slope_bound`` is the k of the
    nonlinearity's slope interval [0, k].
    """

    multiplier: FirMultiplier
    multiplier_class: MultiplierClass
    gamma: float
    min_margin: float
    grid_size: int
    slope_bound: float

    def __post_init__(self):
        if self.multiplier_class is MultiplierClass.NEITHER:
            raise InvalidMultiplier("certificate requires a class member")
        if self.gamma < 1.0 or self.min_margin <= 0.0:
            raise ValueError("certificate requires gamma >= 1 and a positive margin")

    @property
    def offset_gain_certified(self) -> bool:
        """True when the class (Md) also bounds the gain about bias values."""
        return self.multiplier_class is MultiplierClass.MD


@dataclass(frozen=True)
class PhaseObstruction:
    """Angle of 1 + G at the probe frequency and whether class Md is ruled out."""

    angle: float
    md_excluded: bool


@dataclass(frozen=True)
class DcOperatingPoint:
    """Steady-state loop values for a constant second input."""

    u2_bar: float
    y2_bar: float


def _require_discrete_stable(tf: RationalTransferFunction, grid: FrequencyGrid) -> None:
    if tf.domain != DISCRETE or grid.domain != DISCRETE:
        raise DomainMismatch("certification tests run on discrete transfer functions and grids")
    if not is_stable(tf):
        raise ValueError("certification requires a stable transfer function")


def is_suitable(
    m: FirMultiplier,
    tf: RationalTransferFunction,
    grid: FrequencyGrid,
    eps: float = 0.0,
) -> FrequencyCheck:
    """Grid test of Re{M(e^{j omega}) tf(e^{j omega})} > eps.

    Returns the minimising frequency and value so a failure is attributable.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    _require_discrete_stable(tf, grid)
    values = np.real(freq_response(m, grid.points) * eval_at(tf, grid.points))
    i = int(np.argmin(values))
    return FrequencyCheck(bool(values[i] > eps), float(grid.points[i]), float(values[i]))


def circle_criterion(tf: RationalTransferFunction, grid: FrequencyGrid) -> FrequencyCheck:
    """Static-multiplier test Re{1 + tf} > 0 on the grid."""
    _require_discrete_stable(tf, grid)
    values = 1.0 + np.real(eval_at(tf, grid.points))
    i = int(np.argmin(values))
    return FrequencyCheck(bool(values[i] > 0.0), float(grid.points[i]), float(values[i]))


def _quadratic_gamma(m_values: np.ndarray, g_values: np.ndarray, slope_bound: float):
    """Per-frequency coefficients (a, b, c) of the gain quadratic."""
    a = 2.0 * np.real(m_values * (1.0 / slope_bound + g_values))
    b = np.abs(g_values) ** 2 + np.abs(m_values) ** 2
    c = 2.0 * np.real(m_values)
    return a, b, c


def _certificate_from_values(
    m: FirMultiplier,
    m_class: MultiplierClass,
    m_values: np.ndarray,
    g_values: np.ndarray,
    grid: FrequencyGrid,
    slope_bound: float,
) -> GainCertificate:
    a, b, c = _quadratic_gamma(m_values, g_values, slope_bound)
    i = int(np.argmin(a))
    if a[i] <= 0.0:
        raise NotSuitable(
            f"Re{{M (1/k + G)}} = {a[i] / 2.0:.6g} <= 0 at omega = {grid.points[i]:.6g}; "
            "no finite gain certified",
            frequency=float(grid.points[i]),
            value=float(a[i] / 2.0),
        )
    # a > 0 and c >= 0 for class members, so the larger root is real and the
    # inequality holds strictly beyond it.
    per_freq = (b + np.sqrt(b * b + 4.0 * a * c)) / (2.0 * a)
    gamma = max(1.0, float(np.max(per_freq)))
    inflated = gamma * (1.0 + POST_CHECK_INFLATION)
    margin = a * inflated * inflated - b * inflated - c
    min_margin = float(np.min(margin))
    if min_margin <= 0.0:
        raise ArithmeticError("post-validation of the certified inequality failed")
    return GainCertificate(m, m_class, gamma, min_margin, len(grid), slope_bound)


def gamma_bound(
    m: FirMultiplier,
    plant: RationalTransferFunction,
    grid: FrequencyGrid,
    slope_bound: float = 1.0,
) -> GainCertificate:
    """Smallest grid-certified gain bound for the multiplier and plant.

    At each grid frequency the quadratic a gamma^2 - b gamma - c with
    a = 2 Re[M (1/k + G)], b = |G|^2 + |M|^2, c = 2 Re[M] is positive
    exactly beyond its larger root; the certificate takes the largest root
    over the grid (clamped to gamma >= 1) and re-checks the inequality at
    gamma * (1 + 1e-9) at every grid point.

    Raises
    ------
    NotSuitable
        If a <= 0 at some grid frequency.
    InvalidMultiplier
        If the multiplier is in neither class.
    """
    if slope_bound <= 0:
        raise ValueError("slope bound must be positive")
    m_class = classify(m)
    if m_class is MultiplierClass.NEITHER:
        raise InvalidMultiplier("multiplier taps exceed the center mass; not a class member")
    _require_discrete_stable(plant, grid)
    m_values = freq_response(m, grid.points)
    g_values = eval_at(plant, grid.points)
    return _certificate_from_values(m, m_class, m_values, g_values, grid, slope_bound)


def phase_obstruction(plant: RationalTransferFunction, omega0: float) -> PhaseObstruction:
    """Principal angle of 1 + G(e^{j omega0}), with the class-Md exclusion flag.

    At omega0 = 2 pi / 3 the largest phase any class-Md multiplier can
    reach is pi/6, so an angle of 1 + G below -(pi/2 + pi/6) = -2 pi / 3
    leaves no class-Md multiplier able to make Re[M (1 + G)] positive
    there.  Other probe frequencies report the angle for information with
    ``md_excluded`` false.
    """
    if not 0.0 < omega0 < np.pi:
        raise ValueError("probe frequency must lie in (0, pi)")
    if plant.domain != DISCRETE:
        raise DomainMismatch("phase probe requires a discrete transfer function")
    value = 1.0 + eval_at(plant, omega0)
    angle = math.atan2(value.imag, value.real)
    at_probe = abs(omega0 - OBSTRUCTION_FREQUENCY) <= 1e-9
    excluded = bool(at_probe and angle < -OBSTRUCTION_FREQUENCY)
    return PhaseObstruction(angle, excluded)


def search_one_tap(
    plant: RationalTransferFunction,
    grid: FrequencyGrid,
    lags,
    c_step: float = 0.01,
    class_filter: str = "md",
    slope_bound: float = 1.0,
) -> GainCertificate:
    """Best single-tap multiplier 1 + c e^{-j omega lag} over a value grid.

    Scans c over [-1, 1] in steps of ``c_step`` for every lag in ``lags``,
    keeping candidates in the requested family ("md" or "mdodd"), and
    returns the certificate with the smallest gamma.  Ties break toward
    smaller |c|, then smaller |lag|, so results do not depend on
    evaluation order.

    Raises :class:`NotFound` when no candidate certifies a finite gamma.
    """
    if not 0.0 < c_step <= 1.0:
        raise ValueError("c_step must be in (0, 1]")
    lags = [int(lag) for lag in lags]
    if not lags or any(lag == 0 for lag in lags):
        raise ValueError("lag set must be nonempty with nonzero lags")
    if class_filter not in ("md", "mdodd"):
        raise ValueError("class_filter must be 'md' or 'mdodd'")
    _require_discrete_stable(plant, grid)
    g_values = eval_at(plant, grid.points)
    steps = int(round(2.0 / c_step))
    candidates = [min(1.0, max(-1.0, round(-1.0 + i * c_step, 12))) for i in range(steps + 1)]
    best = None
    best_key = None
    for lag in lags:
        for c in candidates:
            m = FirMultiplier(1.0, ((lag, c),) if c != 0.0 else ())
            m_class = classify(m)
            if class_filter == "md" and m_class is not MultiplierClass.MD:
                continue
            if m_class is MultiplierClass.NEITHER:
                continue
            try:
                cert = _certificate_from_values(
                    m, m_class, freq_response(m, grid.points), g_values, grid, slope_bound
                )
            except NotSuitable:
                continue
            key = (cert.gamma, abs(c), abs(lag))
            if best_key is None or key < best_key:
                best, best_key = cert, key
    if best is None:
        raise NotFound("no single-tap multiplier in the searched family certifies a finite gain")
    return best


def dc_fixed_point(plant_dc_gain: float, phi: Nonlinearity, r2_bar: float) -> DcOperatingPoint:
    """Steady-state solution of u + G(1) N(u) = r2_bar by bisection.

    The map u -> u + G(1) N(u) is strictly increasing whenever
    1 + G(1) * slope keeps a fixed sign (for the unit saturation this
    just needs G(1) > -1), so the solution is unique.  The residual of the
    returned u is at most 1e-12.

    Raises :class:`NoBracket` if no sign change is found within |u| <= 1e6.
    """

    def f(u: float) -> float:
        return u + plant_dc_gain * eval_nonlinearity(phi, u) - r2_bar

    lo, hi = -1.0, 1.0
    flo, fhi = f(lo), f(hi)
    while flo > 0.0:
        lo *= 2.0
        if abs(lo) > 1e6:
            raise NoBracket("no sign change for u in [-1e6, 1e6]")
        flo = f(lo)
    while fhi < 0.0:
        hi *= 2.0
        if hi > 1e6:
            raise NoBracket("no sign change for u in [-1e6, 1e6]")
        fhi = f(hi)
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if abs(fmid) <= 1e-13:
            break
        if fmid > 0.0:
            hi = mid
        else:
            lo = mid
    if abs(f(mid)) > 1e-12:
        raise ArithmeticError("bisection did not reach the residual tolerance")
    return DcOperatingPoint(mid, eval_nonlinearity(phi, mid))


def certificate_to_json(cert: GainCertificate) -> dict:
    """JSON object {multiplier, class, gamma, min_margin, grid_size, k}."""
    return {
        "multiplier": multiplier_to_json(cert.multiplier),
        "class": cert.multiplier_class.value,
        "gamma": float(cert.gamma),
        "min_margin": float(cert.min_margin),
        "grid_size": int(cert.grid_size),
        "k": float(cert.slope_bound),
    }
