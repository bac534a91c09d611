"""Sampled signals, deterministic signal generators, and power/bias/l2 metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "LengthMismatch",
    "NoiseSpec",
    "SampleSignal",
    "bias_estimate",
    "gen_gaussian",
    "gen_pulse",
    "gen_step",
    "l2_distance",
    "l2_norm",
    "power_seminorm",
    "read_signal_csv",
    "write_signal_csv",
]


class LengthMismatch(ValueError):
    """Two signals that must share a length do not."""


@dataclass(frozen=True, eq=False)
class SampleSignal:
    """Finite real-valued sequence indexed t = 0, 1, ..."""

    samples: np.ndarray
    label: str = ""

    def __post_init__(self):
        data = np.array(self.samples, dtype=float)
        if data.ndim != 1 or data.size == 0:
            raise ValueError("signal must be a nonempty 1-D sequence")
        if not np.all(np.isfinite(data)):
            raise ValueError("signal samples must all be finite")
        data.flags.writeable = False
        object.__setattr__(self, "samples", data)

    def __len__(self) -> int:
        return int(self.samples.size)

    def window(self, start: int, stop: int) -> "SampleSignal":
        """Samples on [start, stop) as a new signal."""
        return SampleSignal(self.samples[start:stop], self.label)


@dataclass(frozen=True)
class NoiseSpec:
    """Seeded Gaussian white-noise description; identical spec gives identical samples."""

    seed: int
    mean: float = 0.0
    variance: float = 1e-3

    def __post_init__(self):
        if self.variance < 0:
            raise ValueError("variance must be nonnegative")


def _samples(y) -> np.ndarray:
    if isinstance(y, SampleSignal):
        return y.samples
    return np.asarray(y, dtype=float)


def gen_step(amplitude: float, onset: int, length: int, label: str = "step") -> SampleSignal:
    """Signal that is 0 before ``onset`` and ``amplitude`` from ``onset`` on."""
    if onset < 0:
        raise ValueError("onset must be nonnegative")
    if length <= onset:
        raise ValueError("length must exceed onset")
    data = np.zeros(length)
    data[onset:] = amplitude
    return SampleSignal(data, label)


def gen_pulse(amplitude: float, period: int, length: int, label: str = "pulse") -> SampleSignal:
    """Square wave in {0, amplitude}: low for the first period/2 samples, then high.

    ``period`` must be even and at least 2 so the split is exact.
    """
    if period < 2:
        raise ValueError("period must be at least 2")
    if period % 2 != 0:
        raise ValueError("period must be even")
    if length < 1:
        raise ValueError("length must be positive")
    t = np.arange(length)
    data = np.where((t % period) < period // 2, 0.0, float(amplitude))
    return SampleSignal(data, label)


_SM64_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SM64_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_SM64_MIX2 = np.uint64(0x94D049BB133111EB)


def _splitmix64(seed: int, count: int) -> np.ndarray:
    """Outputs 1..count of the SplitMix64 generator, as uint64.

    SplitMix64 is a counter generator: output i is the finalizer mix of
    seed + i * golden-gamma (mod 2^64), which lets the whole stream be
    produced in one vectorised pass.
    """
    idx = np.arange(1, count + 1, dtype=np.uint64)
    z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + idx * _SM64_GAMMA
    z = (z ^ (z >> np.uint64(30))) * _SM64_MIX1
    z = (z ^ (z >> np.uint64(27))) * _SM64_MIX2
    return z ^ (z >> np.uint64(31))


def gen_gaussian(spec: NoiseSpec, length: int, label: str = "noise") -> SampleSignal:
    """Deterministic Gaussian sequence from a fixed generator and transform.

    Uniform 64-bit words come from SplitMix64 keyed on ``spec.seed``; each
    word maps to (0, 1] via the top 53 bits, and pairs are shaped with the
    Box-Muller transform.  The output is therefore bit-identical for a
    given spec on any IEEE-754 platform.

    Parameters
    ----------
    spec : NoiseSpec
        Seed, mean, and variance.
    length : int
        Number of samples, at least 1.
    """
    if length < 1:
        raise ValueError("length must be positive")
    pairs = (length + 1) // 2
    bits = _splitmix64(spec.seed, 2 * pairs)
    u = ((bits >> np.uint64(11)).astype(float) + 1.0) * 2.0**-53
    radius = np.sqrt(-2.0 * np.log(u[0::2]))
    angle = 2.0 * np.pi * u[1::2]
    z = np.empty(2 * pairs)
    z[0::2] = radius * np.cos(angle)
    z[1::2] = radius * np.sin(angle)
    data = spec.mean + math.sqrt(spec.variance) * z[:length]
    return SampleSignal(data, label)


def power_seminorm(y, final_fraction: float = 0.5) -> float:
    """Finite-horizon estimate of the power seminorm.

    The power of a sequence is sqrt(limsup_T (1/T) sum_{t<T} y(t)^2).  On
    finite data the limsup is approximated by the maximum average power
    over the horizons T in {ceil(f L), ceil((1+f) L / 2), L} where L is the
    signal length and f = ``final_fraction``; the default f = 0.5 uses the
    dyadic horizons {L/2, 3L/4, L}.  This is an approximation: it is exact
    for signals whose average power has settled by T = f L.
    """
    if not 0 < final_fraction <= 1:
        raise ValueError("final_fraction must be in (0, 1]")
    data = _samples(y)
    length = data.size
    horizons = sorted(
        {
            int(math.ceil(final_fraction * length)),
            int(math.ceil((1.0 + final_fraction) * length / 2.0)),
            length,
        }
    )
    return max(math.sqrt(float(np.mean(data[:h] ** 2))) for h in horizons)


def bias_estimate(y, tail_fraction: float = 0.25) -> float:
    """Mean of the last ceil(tail_fraction * L) samples.

    For a signal that is a constant plus a square-summable transient this
    converges to the constant, which is the minimiser of the tail
    mean-square deviation over constant offsets.
    """
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail_fraction must be in (0, 1]")
    data = _samples(y)
    count = int(math.ceil(tail_fraction * data.size))
    return float(np.mean(data[-count:]))


def l2_norm(y) -> float:
    """Euclidean norm of the samples."""
    return float(np.linalg.norm(_samples(y)))


def l2_distance(y, z) -> float:
    """Euclidean norm of the sample-wise difference; lengths must agree."""
    a = _samples(y)
    b = _samples(z)
    if a.size != b.size:
        raise LengthMismatch(f"signal lengths differ: {a.size} vs {b.size}")
    return float(np.linalg.norm(a - b))


def write_signal_csv(path, y: SampleSignal) -> None:
    """Write a signal as two-column CSV "t,value" with header."""
    data = _samples(y)
    lines = ["t,value"]
    lines.extend(f"{t},{float(v)!r}" for t, v in enumerate(data))
    Path(path).write_text("\n".join(lines) + "\n")


def read_signal_csv(path) -> SampleSignal:
    """Read a two-column "t,value" CSV written by :func:`write_signal_csv`."""
    lines = Path(path).read_text().strip().splitlines()
    if not lines or lines[0].strip() != "t,value":
        raise ValueError(f"{path}: expected header 't,value'")
    values = [float(line.split(",")[1]) for line in lines[1:]]
    return SampleSignal(np.array(values), Path(path).stem)
