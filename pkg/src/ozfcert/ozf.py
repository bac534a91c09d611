"""FIR multipliers: positive center mass plus off-center taps, class tests, frequency response.

The multiplier classes certify feedback loops with monotone nonlinearities.
A multiplier m(t) = m0 delta(t) + sum_i g_i delta(t - i) (i != 0) belongs to

* class Md when every g_i <= 0 and sum |g_i| <= m0, and
* class MdOdd when only the l1 bound sum |g_i| <= m0 holds.

Md membership additionally certifies gain bounds about shifted operating
points; MdOdd-only membership requires the nonlinearity to be odd.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MAX_TAP_LAG",
    "FirMultiplier",
    "MultiplierClass",
    "classify",
    "format_multiplier",
    "freq_response",
    "multiplier_from_json",
    "multiplier_to_json",
    "parse_multiplier",
]

#: Default cap on |lag|; override per multiplier via ``max_lag``.
MAX_TAP_LAG = 64


class MultiplierClass(enum.Enum):
    MD = "Md"
    MD_ODD_ONLY = "MdOddOnly"
    NEITHER = "Neither"


@dataclass(frozen=True)
class FirMultiplier:
    """Center coefficient ``m0 > 0`` plus finitely many taps at nonzero lags.

    ``taps`` may be given as a mapping {lag: value} or an iterable of
    (lag, value) pairs; it is normalised to a lag-sorted tuple with
    zero-valued taps dropped.  Positive lags are causal (multiply
    e^{-j omega lag} in the frequency response), negative lags anticausal.
    """

    m0: float
    taps: tuple = ()
    max_lag: int = field(default=MAX_TAP_LAG, compare=False, repr=False)

    def __post_init__(self):
        m0 = float(self.m0)
        if not np.isfinite(m0) or m0 <= 0:
            raise ValueError("center coefficient m0 must be positive and finite")
        pairs = self.taps.items() if isinstance(self.taps, dict) else self.taps
        seen = {}
        for lag, value in pairs:
            lag = int(lag)
            value = float(value)
            if lag == 0:
                raise ValueError("tap lags must be nonzero (lag 0 is the center)")
            if abs(lag) > self.max_lag:
                raise ValueError(f"|lag| = {abs(lag)} exceeds the cap {self.max_lag}")
            if lag in seen:
                raise ValueError(f"duplicate tap lag {lag}")
            if not np.isfinite(value):
                raise ValueError("tap values must be finite")
            if value != 0.0:
                seen[lag] = value
        object.__setattr__(self, "m0", m0)
        object.__setattr__(self, "taps", tuple(sorted(seen.items())))

    @property
    def l1_taps(self) -> float:
        """Sum of absolute tap values."""
        return float(sum(abs(v) for _, v in self.taps))

    @property
    def tap_map(self) -> dict:
        return dict(self.taps)


def classify(m: FirMultiplier) -> MultiplierClass:
    """Class membership from the tap signs and the l1 bound.

    The l1 inequality is non-strict: sum |g_i| = m0 is still a member.
    """
    if m.l1_taps > m.m0:
        return MultiplierClass.NEITHER
    if all(value <= 0 for _, value in m.taps):
        return MultiplierClass.MD
    return MultiplierClass.MD_ODD_ONLY


def freq_response(m: FirMultiplier, omega):
    """m0 + sum_i g_i e^{-j omega i}; scalar or array ``omega``."""
    w = np.asarray(omega, dtype=float)
    resp = np.full(w.shape, m.m0, dtype=complex)
    for lag, value in m.taps:
        resp = resp + value * np.exp(-1j * w * lag)
    if w.ndim == 0:
        return complex(resp)
    return resp


def parse_multiplier(text: str, max_lag: int = MAX_TAP_LAG) -> FirMultiplier:
    """Parse the shorthand "m0|v@lag,v@lag,...", e.g. "1|-0.66@+1".

    The part after the bar may be empty for a static multiplier.
    """
    if "|" not in text:
        raise ValueError(f"multiplier spec {text!r}: expected 'm0|taps'")
    head, _, tail = text.partition("|")
    try:
        m0 = float(head.strip())
    except ValueError:
        raise ValueError(f"multiplier spec {text!r}: bad center coefficient {head.strip()!r}") from None
    taps = []
    tail = tail.strip()
    if tail:
        for item in tail.split(","):
            value_str, sep, lag_str = item.strip().partition("@")
            if not sep:
                raise ValueError(f"multiplier spec {text!r}: tap {item.strip()!r} missing '@lag'")
            try:
                taps.append((int(lag_str.strip()), float(value_str.strip())))
            except ValueError:
                raise ValueError(f"multiplier spec {text!r}: bad tap {item.strip()!r}") from None
    return FirMultiplier(m0, tuple(taps), max_lag=max_lag)


def format_multiplier(m: FirMultiplier) -> str:
    """Inverse of :func:`parse_multiplier` (up to float formatting)."""
    taps = ",".join(f"{value:g}@{lag:+d}" for lag, value in m.taps)
    return f"{m.m0:g}|{taps}"


def multiplier_to_json(m: FirMultiplier) -> dict:
    """JSON object {m0, taps: [{lag, value}]}."""
    return {
        "m0": float(m.m0),
        "taps": [{"lag": int(lag), "value": float(value)} for lag, value in m.taps],
    }


def multiplier_from_json(obj: dict) -> FirMultiplier:
    taps = tuple((t["lag"], t["value"]) for t in obj.get("taps", []))
    return FirMultiplier(obj["m0"], taps)
