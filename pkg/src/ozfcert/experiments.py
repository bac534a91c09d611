"""Benchmark experiment protocols: step-pair responses and noise-driven pulses.

Both protocols run the bundled saturated loop with plant
g (2z + 0.92) / (z (z - 0.5)) and report the metrics used by the
acceptance checks.  They return plain dicts so the CLI can serialise them
directly.
"""

from __future__ import annotations

import numpy as np

from .certify import GainCertificate, NotFound, dc_fixed_point, gamma_bound, search_one_tap
from .loop import LuryeSystem, saturation, simulate_lurye
from .metrics import (
    NoiseSpec,
    SampleSignal,
    bias_estimate,
    gen_gaussian,
    gen_pulse,
    gen_step,
    power_seminorm,
)
from .ozf import parse_multiplier
from .rational import FrequencyGrid, benchmark_plant, dc_gain, hinf_on_grid

__all__ = [
    "REFERENCE_MULTIPLIERS",
    "reference_certificate",
    "run_pulse_noise",
    "run_step_pair",
]

#: One-tap reference multipliers known to certify the benchmark gains.
REFERENCE_MULTIPLIERS = {
    0.6: "1|-0.66@+1",
    0.8: "1|-0.85@+1",
    1.0: "1|+0.9@-1",
}


def reference_certificate(g: float, grid: FrequencyGrid | None = None) -> GainCertificate | None:
    """Certificate for the benchmark plant at gain ``g``, or None.

    Uses the table of reference multipliers when ``g`` matches a benchmark
    gain; otherwise searches one-tap multipliers at lags +1 and -1.
    """
    grid = grid if grid is not None else FrequencyGrid.uniform()
    plant = benchmark_plant(g)
    for gain, spec in REFERENCE_MULTIPLIERS.items():
        if abs(g - gain) <= 1e-12:
            return gamma_bound(parse_multiplier(spec), plant, grid)
    try:
        return search_one_tap(plant, grid, [1, -1], class_filter="mdodd")
    except NotFound:
        return None


def run_step_pair(g: float, horizon: int = 1200, amplitude: float = 2.7) -> dict:
    """Drive the loop with a step and its one-sample delay; compare the outputs.

    The two inputs differ in a single sample, so their difference has
    finite energy.  The tail metrics start at 2/3 of the horizon and the
    oscillation window is the final third (t >= 800 and the last 400
    samples at the default horizon).
    """
    if horizon < 3:
        raise ValueError("horizon too short for the step protocol")
    system = LuryeSystem(benchmark_plant(g), saturation())
    r1 = SampleSignal(np.zeros(horizon), "r1")
    r2a = gen_step(amplitude, 1, horizon, "r2a")
    r2b = gen_step(amplitude, 2, horizon, "r2b")
    traj_a = simulate_lurye(system, r1, r2a, horizon)
    traj_b = simulate_lurye(system, r1, r2b, horizon)

    tail_start = (2 * horizon) // 3
    window = horizon - tail_start
    u2a = traj_a.u2.samples
    u2b = traj_b.u2.samples
    diff = u2a - u2b
    operating = dc_fixed_point(dc_gain(system.plant), system.phi, amplitude)

    last_a = u2a[-window:]
    return {
        "g": g,
        "horizon": horizon,
        "amplitude": amplitude,
        "tail_start": tail_start,
        "r1_spec": {"kind": "zero"},
        "r2_spec": {"kind": "step_pair", "amplitude": amplitude, "onsets": [1, 2]},
        "u2_fixed_point": operating.u2_bar,
        "diff_tail_max": float(np.max(np.abs(diff[tail_start:]))),
        "tail_dc_error_a": float(np.max(np.abs(u2a[tail_start:] - operating.u2_bar))),
        "tail_dc_error_b": float(np.max(np.abs(u2b[tail_start:] - operating.u2_bar))),
        "diff_tail_power": power_seminorm(diff[-window:]),
        "u2_l2_distance": float(np.linalg.norm(diff)),
        "u2a_tail_power_about_mean": power_seminorm(last_a - np.mean(last_a)),
        "inputs": {"r1": r1, "r2a": r2a, "r2b": r2b},
        "trajectories": {"a": traj_a, "b": traj_b},
    }


def run_pulse_noise(
    g: float,
    horizon: int = 1200,
    seed: int = 42,
    variance: float = 1e-3,
    period: int = 400,
    amplitude: float = 2.7,
    grid: FrequencyGrid | None = None,
    multiplier: str | None = None,
) -> dict:
    """Pulse on the second input, seeded Gaussian noise on the first.

    The run is split into half-period segments (constant pulse level).
    Within each segment the first quarter is discarded as a settling
    prefix, the bias is the tail mean of the remainder, and the reported
    power is the power seminorm of the deviation from that bias.  Noise
    enters at the plant input, so its effect on the loop comparison
    channel is bounded through the plant's peak gain; each segment
    carries the bound

        gamma * (hinf(G) * power(r1 segment) + power(r2 segment residual)).
    """
    if period < 4 or period % 2 != 0:
        raise ValueError("period must be an even integer >= 4")
    if horizon < period:
        raise ValueError("horizon must cover at least one pulse period")
    grid = grid if grid is not None else FrequencyGrid.uniform()
    plant = benchmark_plant(g)
    system = LuryeSystem(plant, saturation())
    spec = NoiseSpec(seed, 0.0, variance)
    r1 = gen_gaussian(spec, horizon, "r1")
    r2 = gen_pulse(amplitude, period, horizon, "r2")
    traj = simulate_lurye(system, r1, r2, horizon)

    if multiplier is not None:
        cert = gamma_bound(parse_multiplier(multiplier), plant, grid)
    else:
        cert = reference_certificate(g, grid)
    plant_peak = hinf_on_grid(plant, grid).value

    seg_len = period // 2
    settle = seg_len // 4
    segments = []
    for s in range(horizon // seg_len):
        start = s * seg_len
        stop = start + seg_len
        u2_seg = traj.u2.samples[start + settle : stop]
        r1_seg = r1.samples[start + settle : stop]
        r2_seg = r2.samples[start + settle : stop]
        bias = bias_estimate(u2_seg)
        deviation = u2_seg - bias
        seg_power = power_seminorm(deviation)
        r1_power = power_seminorm(r1_seg)
        r2_residual_power = power_seminorm(r2_seg - bias_estimate(r2_seg))
        bound = (
            cert.gamma * (plant_peak * r1_power + r2_residual_power)
            if cert is not None
            else None
        )
        tail = u2_seg[-len(u2_seg) // 4 :]
        tail_std = float(np.std(tail))
        segments.append(
            {
                "index": s,
                "level": "low" if s % 2 == 0 else "high",
                "start": start,
                "settle": settle,
                "bias": bias,
                "bias_tail_std": tail_std,
                "bias_unreliable": bool(tail_std > 0.05 * (1.0 + abs(bias))),
                "power_about_bias": seg_power,
                "r1_power": r1_power,
                "r2_residual_power": r2_residual_power,
                "bound": bound,
                "within_bound": bool(bound is not None and seg_power <= bound),
            }
        )
    noise_power = power_seminorm(r1)
    return {
        "g": g,
        "horizon": horizon,
        "seed": seed,
        "variance": variance,
        "period": period,
        "amplitude": amplitude,
        "r1_spec": {"kind": "gaussian", "seed": seed, "mean": 0.0, "variance": variance},
        "r2_spec": {"kind": "pulse", "amplitude": amplitude, "period": period},
        "plant_peak_gain": plant_peak,
        "certificate": cert,
        "noise_power": noise_power,
        "r2_equivalent_noise_power": plant_peak * noise_power,
        "segments": segments,
        "inputs": {"r1": r1, "r2": r2},
        "trajectory": traj,
    }
