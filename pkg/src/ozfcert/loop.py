"""Time-domain simulation of the feedback loop y1 = G u1, y2 = N(u2).

The interconnection is u1 = r1 - y2 and u2 = y1 + r2 with a memoryless
monotone nonlinearity N.  The plant must be strictly proper so that each
sample's loop equations resolve in input order without an algebraic loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .metrics import SampleSignal
from .rational import (
    DISCRETE,
    DomainMismatch,
    RationalTransferFunction,
    TransposedDirectForm,
    is_stable,
)

__all__ = [
    "LuryeSystem",
    "LuryeTrajectory",
    "Nonlinearity",
    "NotStrictlyProper",
    "deadzone",
    "eval_nonlinearity",
    "read_trajectory_csv",
    "saturation",
    "simulate_lurye",
    "table_nonlinearity",
    "write_trajectory_csv",
]


class NotStrictlyProper(ValueError):
    """Plant has direct feedthrough; the loop would be algebraic."""


@dataclass(frozen=True, eq=False)
class Nonlinearity:
    """Memoryless monotone map with chord slopes in [0, slope_bound].

    Kinds: "saturation" (unit limits), "deadzone" (unit band), "table"
    (piecewise-linear through given points, held constant outside).
    """

    kind: str
    slope_bound: float = 1.0
    table_x: np.ndarray | None = None
    table_y: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("saturation", "deadzone", "table"):
            raise ValueError(f"unknown nonlinearity kind {self.kind!r}")
        if self.slope_bound <= 0:
            raise ValueError("slope bound must be positive")
        if self.kind == "table":
            x = np.asarray(self.table_x, dtype=float)
            y = np.asarray(self.table_y, dtype=float)
            if x.ndim != 1 or x.size < 2 or x.shape != y.shape:
                raise ValueError("table needs matching 1-D x and y with at least 2 points")
            if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
                raise ValueError("table entries must be finite")
            if not np.all(np.diff(x) > 0):
                raise ValueError("table x must be strictly increasing")
            if np.any(np.diff(y) < 0):
                raise ValueError("table y must be nondecreasing (monotone map)")
            object.__setattr__(self, "table_x", x)
            object.__setattr__(self, "table_y", y)

    def __call__(self, x):
        return eval_nonlinearity(self, x)


def saturation() -> Nonlinearity:
    """Unit saturation: x inside (-1, 1), sign(x) outside; slope bound 1."""
    return Nonlinearity("saturation", 1.0)


def deadzone() -> Nonlinearity:
    """Unit deadzone: 0 inside [-1, 1], x - sign(x) outside; slope bound 1."""
    return Nonlinearity("deadzone", 1.0)


def table_nonlinearity(x, y) -> Nonlinearity:
    """Monotone piecewise-linear map through (x, y), flat outside the range."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.size < 2 or x.shape != y.shape or not np.all(np.diff(x) > 0):
        raise ValueError("table x must be strictly increasing and match y")
    slopes = np.diff(y) / np.diff(x)
    bound = float(np.max(slopes)) if np.any(slopes > 0) else 1.0
    return Nonlinearity("table", bound, x, y)


def eval_nonlinearity(phi: Nonlinearity, x):
    """Apply the map to a scalar or array.

    Saturation returns x itself at |x| = 1, where both branch definitions
    agree.
    """
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if phi.kind == "saturation":
        out = np.clip(x, -1.0, 1.0)
    elif phi.kind == "deadzone":
        out = x - np.clip(x, -1.0, 1.0)
    else:
        out = np.interp(x, phi.table_x, phi.table_y)
    return float(out) if scalar else out


@dataclass(frozen=True, eq=False)
class LuryeSystem:
    """Stable, strictly proper discrete plant in feedback with a nonlinearity."""

    plant: RationalTransferFunction
    phi: Nonlinearity

    def __post_init__(self):
        if self.plant.domain != DISCRETE:
            raise DomainMismatch("loop simulation requires a discrete plant")
        if not self.plant.strictly_proper:
            raise NotStrictlyProper("plant has direct feedthrough; refusing the algebraic loop")
        if not is_stable(self.plant):
            raise ValueError("plant must be stable")


@dataclass(frozen=True, eq=False)
class LuryeTrajectory:
    """The four loop signals produced by one simulation run."""

    u1: SampleSignal
    u2: SampleSignal
    y1: SampleSignal
    y2: SampleSignal

    def __len__(self) -> int:
        return len(self.u2)


def simulate_lurye(system: LuryeSystem, r1, r2, horizon: int) -> LuryeTrajectory:
    """Run the loop for ``horizon`` samples from zero initial plant state.

    Per step t: y1(t) comes from the plant state (no feedthrough), then
    u2(t) = y1(t) + r2(t), y2(t) = N(u2(t)), u1(t) = r1(t) - y2(t), and the
    plant state advances on u1(t).

    Parameters
    ----------
    r1, r2 : SampleSignal or array-like
        Exogenous inputs, at least ``horizon`` samples each.
    """
    if horizon < 1:
        raise ValueError("horizon must be positive")
    r1s = r1.samples if isinstance(r1, SampleSignal) else np.asarray(r1, dtype=float)
    r2s = r2.samples if isinstance(r2, SampleSignal) else np.asarray(r2, dtype=float)
    if r1s.size < horizon or r2s.size < horizon:
        raise ValueError("input signals must cover the simulation horizon")
    filt = TransposedDirectForm(system.plant)
    phi = system.phi
    u1 = np.empty(horizon)
    u2 = np.empty(horizon)
    y1 = np.empty(horizon)
    y2 = np.empty(horizon)
    for t in range(horizon):
        y1[t] = filt.output(0.0)
        u2[t] = y1[t] + r2s[t]
        y2[t] = eval_nonlinearity(phi, u2[t])
        u1[t] = r1s[t] - y2[t]
        filt.advance(u1[t], y1[t])
    return LuryeTrajectory(
        SampleSignal(u1, "u1"),
        SampleSignal(u2, "u2"),
        SampleSignal(y1, "y1"),
        SampleSignal(y2, "y2"),
    )


def write_trajectory_csv(path, traj: LuryeTrajectory) -> None:
    """Write a trajectory as CSV "t,u1,u2,y1,y2" with header."""
    lines = ["t,u1,u2,y1,y2"]
    for t in range(len(traj)):
        lines.append(
            f"{t},{float(traj.u1.samples[t])!r},{float(traj.u2.samples[t])!r},"
            f"{float(traj.y1.samples[t])!r},{float(traj.y2.samples[t])!r}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def read_trajectory_csv(path) -> LuryeTrajectory:
    lines = Path(path).read_text().strip().splitlines()
    if not lines or lines[0].strip() != "t,u1,u2,y1,y2":
        raise ValueError(f"{path}: expected header 't,u1,u2,y1,y2'")
    cols = [[], [], [], []]
    for line in lines[1:]:
        parts = line.split(",")
        for k in range(4):
            cols[k].append(float(parts[k + 1]))
    return LuryeTrajectory(
        SampleSignal(np.array(cols[0]), "u1"),
        SampleSignal(np.array(cols[1]), "u2"),
        SampleSignal(np.array(cols[2]), "y1"),
        SampleSignal(np.array(cols[3]), "y2"),
    )
