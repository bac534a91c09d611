"""Gain and offset-gain certification of saturated discrete-time feedback loops.

The package certifies finite gain bounds for a loop of a stable linear
plant and a memoryless monotone nonlinearity using FIR multipliers,
estimates peak gains on frequency grids, simulates the loop, and measures
power and bias of the resulting signals.  The ``ozfcert`` command exposes
the same functionality and reproduces the bundled benchmark study.
"""

from .certify import (
    DcOperatingPoint,
    FrequencyCheck,
    GainCertificate,
    InvalidMultiplier,
    NoBracket,
    NotFound,
    NotSuitable,
    PhaseObstruction,
    circle_criterion,
    dc_fixed_point,
    gamma_bound,
    is_suitable,
    phase_obstruction,
    search_one_tap,
)
from .loop import (
    LuryeSystem,
    LuryeTrajectory,
    Nonlinearity,
    NotStrictlyProper,
    deadzone,
    eval_nonlinearity,
    saturation,
    simulate_lurye,
    table_nonlinearity,
)
from .metrics import (
    LengthMismatch,
    NoiseSpec,
    SampleSignal,
    bias_estimate,
    gen_gaussian,
    gen_pulse,
    gen_step,
    l2_distance,
    l2_norm,
    power_seminorm,
)
from .ozf import (
    FirMultiplier,
    MultiplierClass,
    classify,
    format_multiplier,
    freq_response,
    parse_multiplier,
)
from .rational import (
    DomainMismatch,
    FrequencyGrid,
    PeakGain,
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
    sensitivity,
    simulate_lti,
)

__version__ = "0.1.0"
