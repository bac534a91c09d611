"""Rational transfer functions in z or s: evaluation, stability, peak gain, simulation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import SampleSignal

__all__ = [
    "CONTINUOUS",
    "DEFAULT_GRID_SIZE",
    "DomainMismatch",
    "FrequencyGrid",
    "PeakGain",
    "PoleOnBoundary",
    "RationalTransferFunction",
    "TransposedDirectForm",
    "benchmark_continuous_plant",
    "benchmark_plant",
    "dc_gain",
    "eval_at",
    "hinf_on_grid",
    "hinf_refined",
    "is_stable",
    "one_plus",
    "poles",
    "sensitivity",
    "simulate_lti",
    "tf_from_json",
    "tf_to_json",
]

DISCRETE = "discrete"
CONTINUOUS = "continuous"

#: Default number of grid points on [0, pi] (2^16).
DEFAULT_GRID_SIZE = 65536

_BOUNDARY_TOL = 1e-12
_STABILITY_MARGIN = 1e-9


class PoleOnBoundary(ValueError):
    """The denominator vanishes (within tolerance) at an evaluation point."""


class DomainMismatch(ValueError):
    """Operation applied to a transfer function of the wrong domain."""


@dataclass(frozen=True)
class RationalTransferFunction:
    """Proper rational function of z (discrete) or s (continuous).

    Coefficients are real, highest power first.  The denominator's leading
    coefficient must be nonzero and the numerator degree must not exceed
    the denominator degree.
    """

    domain: str
    num: tuple
    den: tuple

    def __post_init__(self):
        if self.domain not in (DISCRETE, CONTINUOUS):
            raise ValueError(f"unknown domain {self.domain!r}")
        num = tuple(float(c) for c in self.num)
        den = tuple(float(c) for c in self.den)
        if not num or not den:
            raise ValueError("coefficient lists must be nonempty")
        if not all(np.isfinite(num)) or not all(np.isfinite(den)):
            raise ValueError("coefficients must be finite")
        if den[0] == 0.0:
            raise ValueError("denominator leading coefficient must be nonzero")
        # Trim numerator leading zeros so degrees are well defined.
        first = next((i for i, c in enumerate(num) if c != 0.0), len(num) - 1)
        num = num[first:]
        if len(num) > len(den):
            raise ValueError("numerator degree must not exceed denominator degree")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @property
    def strictly_proper(self) -> bool:
        return len(self.num) < len(self.den) or self.num == (0.0,) * len(self.num)


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Strictly increasing evaluation frequencies for one domain.

    Discrete grids cover [0, pi]; conjugate symmetry of real-coefficient
    transfer functions supplies (pi, 2 pi).  Continuous grids are
    log-spaced with omega = 0 prepended.
    """

    domain: str
    points: np.ndarray

    def __post_init__(self):
        if self.domain not in (DISCRETE, CONTINUOUS):
            raise ValueError(f"unknown domain {self.domain!r}")
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 1 or pts.size == 0:
            raise ValueError("grid must be a nonempty 1-D sequence")
        if pts.size > 1 and not np.all(np.diff(pts) > 0):
            raise ValueError("grid points must be strictly increasing")
        if self.domain == DISCRETE:
            if pts[0] != 0.0 or abs(pts[-1] - np.pi) > 1e-12:
                raise ValueError("discrete grids must span [0, pi]")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return int(self.points.size)

    @classmethod
    def uniform(cls, size: int = DEFAULT_GRID_SIZE) -> "FrequencyGrid":
        """Uniform discrete grid of ``size`` points on [0, pi]."""
        if size < 2:
            raise ValueError("grid size must be at least 2")
        return cls(DISCRETE, np.linspace(0.0, np.pi, size))

    @classmethod
    def log_spaced(cls, w_min: float, w_max: float, size: int) -> "FrequencyGrid":
        """Continuous grid: ``size`` log-spaced points on [w_min, w_max] plus 0."""
        if w_min <= 0 or w_max <= w_min:
            raise ValueError("need 0 < w_min < w_max")
        if size < 2:
            raise ValueError("grid size must be at least 2")
        pts = np.concatenate(([0.0], np.logspace(np.log10(w_min), np.log10(w_max), size)))
        return cls(CONTINUOUS, pts)


@dataclass(frozen=True)
class PeakGain:
    """Largest grid magnitude and the frequency where it occurs."""

    value: float
    frequency: float


def eval_at(tf: RationalTransferFunction, omega):
    """Frequency response at omega: z = e^{j omega} (discrete) or s = j omega.

    Accepts a scalar or an array of frequencies.  Raises
    :class:`PoleOnBoundary` if the denominator modulus falls below 1e-12
    at any requested point.
    """
    w = np.asarray(omega, dtype=float)
    points = np.exp(1j * w) if tf.domain == DISCRETE else 1j * w
    den_val = np.polyval(tf.den, points)
    small = np.abs(den_val) < _BOUNDARY_TOL
    if np.any(small):
        bad = float(np.atleast_1d(w)[np.argmax(np.atleast_1d(small))])
        raise PoleOnBoundary(f"denominator vanishes at omega = {bad}")
    value = np.polyval(tf.num, points) / den_val
    if w.ndim == 0:
        return complex(value)
    return value


def poles(tf: RationalTransferFunction) -> np.ndarray:
    """Denominator roots via companion-matrix eigenvalues (numpy.roots)."""
    if len(tf.den) == 1:
        return np.array([], dtype=complex)
    return np.roots(tf.den)


def is_stable(tf: RationalTransferFunction) -> bool:
    """All poles strictly inside the unit circle (discrete) or left half plane.

    A stability margin of 1e-9 is applied, so poles on the boundary count
    as unstable.  A degree-zero denominator has no poles and is stable.
    """
    p = poles(tf)
    if p.size == 0:
        return True
    if tf.domain == DISCRETE:
        return bool(np.max(np.abs(p)) < 1.0 - _STABILITY_MARGIN)
    return bool(np.max(p.real) < -_STABILITY_MARGIN)


def dc_gain(tf: RationalTransferFunction) -> float:
    """Steady-state gain: value at z = 1 or s = 0 (real for real coefficients)."""
    return float(eval_at(tf, 0.0).real)


def one_plus(tf: RationalTransferFunction) -> RationalTransferFunction:
    """The transfer function 1 + tf."""
    return RationalTransferFunction(tf.domain, tuple(np.polyadd(tf.den, tf.num)), tf.den)


def sensitivity(tf: RationalTransferFunction) -> RationalTransferFunction:
    """The transfer function 1 / (1 + tf)."""
    return RationalTransferFunction(tf.domain, tf.den, tuple(np.polyadd(tf.den, tf.num)))


def hinf_on_grid(tf: RationalTransferFunction, grid: FrequencyGrid) -> PeakGain:
    """Maximum of |tf| over the grid, with the maximising frequency.

    A grid estimate lower-bounds the true peak gain and is monotone
    nondecreasing under grid refinement.  The transfer function must be
    stable and share the grid's domain.
    """
    if grid.domain != tf.domain:
        raise DomainMismatch("grid and transfer function domains differ")
    if not is_stable(tf):
        raise ValueError("peak gain on a grid requires a stable transfer function")
    mags = np.abs(eval_at(tf, grid.points))
    i = int(np.argmax(mags))
    return PeakGain(float(mags[i]), float(grid.points[i]))


def hinf_refined(
    tf: RationalTransferFunction,
    grid: FrequencyGrid,
    passes: int = 3,
    zoom: float = 10.0,
    points_per_pass: int = 4001,
) -> PeakGain:
    """Grid peak gain with local uniform refinement around the detected peak.

    Each pass lays ``points_per_pass`` uniform points over the current
    window around the best frequency, then shrinks the window by ``zoom``.
    The running maximum is kept, so the estimate can only improve on
    :func:`hinf_on_grid`.
    """
    if grid.domain != tf.domain:
        raise DomainMismatch("grid and transfer function domains differ")
    if not is_stable(tf):
        raise ValueError("peak gain on a grid requires a stable transfer function")
    pts = grid.points
    mags = np.abs(eval_at(tf, pts))
    i = int(np.argmax(mags))
    best = PeakGain(float(mags[i]), float(pts[i]))
    lo = float(pts[max(i - 1, 0)])
    hi = float(pts[min(i + 1, pts.size - 1)])
    for _ in range(passes):
        local = np.linspace(lo, hi, points_per_pass)
        local_mags = np.abs(eval_at(tf, local))
        j = int(np.argmax(local_mags))
        if local_mags[j] > best.value:
            best = PeakGain(float(local_mags[j]), float(local[j]))
        width = (hi - lo) / zoom
        lo = max(local[j] - width / 2, float(pts[0]))
        hi = min(local[j] + width / 2, float(pts[-1]))
    return best


class TransposedDirectForm:
    """Direct form II transposed realization with zero initial state.

    Realizes y(t) = (1/a0) [sum_j b_j u(t-j) - sum_{i>=1} a_i y(t-i)] in
    the standard transposed state recurrence.  For strictly proper
    transfer functions the feedthrough b0 is zero, so the output at time t
    does not depend on the input at time t.
    """

    def __init__(self, tf: RationalTransferFunction):
        if tf.domain != DISCRETE:
            raise DomainMismatch("difference-equation simulation requires a discrete transfer function")
        a = np.asarray(tf.den, dtype=float)
        b = np.zeros(a.size)
        b[a.size - len(tf.num):] = tf.num
        self._b = b / a[0]
        self._a = a / a[0]
        self._state = np.zeros(a.size - 1)

    @property
    def feedthrough(self) -> float:
        return float(self._b[0])

    def output(self, u: float) -> float:
        """Output at the current step for input ``u`` (state not advanced)."""
        top = self._state[0] if self._state.size else 0.0
        return float(self._b[0] * u + top)

    def advance(self, u: float, y: float) -> None:
        """Advance the state given this step's input and output."""
        b, a, z = self._b, self._a, self._state
        n = z.size
        for i in range(n - 1):
            z[i] = b[i + 1] * u + z[i + 1] - a[i + 1] * y
        if n:
            z[n - 1] = b[n] * u - a[n] * y

    def step(self, u: float) -> float:
        y = self.output(u)
        self.advance(u, y)
        return y


def simulate_lti(tf: RationalTransferFunction, u) -> SampleSignal:
    """Open-loop response of a discrete transfer function from zero initial state.

    ``u`` may be a :class:`~ozfcert.metrics.SampleSignal` or array-like.
    """
    data = u.samples if isinstance(u, SampleSignal) else np.asarray(u, dtype=float)
    filt = TransposedDirectForm(tf)
    out = np.empty(data.size)
    for t in range(data.size):
        out[t] = filt.step(data[t])
    return SampleSignal(out, "y")


def tf_to_json(tf: RationalTransferFunction) -> dict:
    """JSON object {domain, num, den} for a transfer function."""
    return {"domain": tf.domain, "num": [float(c) for c in tf.num], "den": [float(c) for c in tf.den]}


def tf_from_json(obj: dict) -> RationalTransferFunction:
    return RationalTransferFunction(obj["domain"], tuple(obj["num"]), tuple(obj["den"]))


def benchmark_plant(g: float) -> RationalTransferFunction:
    """The bundled benchmark plant g (2z + 0.92) / (z (z - 0.5))."""
    return RationalTransferFunction(DISCRETE, (2.0 * g, 0.92 * g), (1.0, -0.5, 0.0))


def benchmark_continuous_plant() -> RationalTransferFunction:
    """Continuous benchmark plant 909 / ((s^2 + 0.1 s + 1)(s + 100))."""
    den = np.polymul([1.0, 0.1, 1.0], [1.0, 100.0])
    return RationalTransferFunction(CONTINUOUS, (909.0,), tuple(den))
