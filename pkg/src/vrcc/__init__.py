"""Joint communication/computing duration planning for proactive VR streaming.

The library optimizes how one segment's time budget is split between
rendering and transmission under no-squeeze constraints, classifies the
resource-configuration regime, replays the per-segment pipeline for any
plan, and derives per-user rates from a zero-forcing downlink model. The
``vrcc`` CLI drives all of it from YAML scenario files.
"""

from .channel import (
    ChannelParams,
    ComputeParams,
    computing_rate,
    ensemble_average_rate,
    equivalent_rate,
    power_allocation,
    rate_from_gains,
    zf_beamformers,
    zf_equivalent_gains,
)
from .config import Scenario, SweepAxis, load_scenario
from .errors import (
    ConfigError,
    DegenerateRatesError,
    InvalidStepError,
    InvalidSweepError,
    InvalidTimingError,
    SingularDrawError,
    VrccError,
    ZFInfeasibleError,
)
from .kernels import active_backend, numba_available
from .model import (
    Bottleneck,
    Case,
    DeliverySemantics,
    DurationPlan,
    ResourceRates,
    Scheme,
    SqueezeOutcome,
    TimingParams,
    VideoParams,
    fov_bits,
    require_matching_segments,
    segment_bit_targets,
)
from .optimizer import (
    OptimizationResult,
    baseline_plan,
    completion_rate,
    grid_oracle,
    optimize_durations,
    t_c_max,
    unconstrained_optimum,
)
from .regions import (
    Region,
    RegionVerdict,
    SweepCell,
    analyze,
    classify_case,
    classify_region,
    efficient_condition,
    sweep,
)
from .simulator import (
    SegmentOutcome,
    SimConfig,
    mtp_latency,
    remaining_budget,
    simulate,
    squeeze_of_plan,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "VrccError",
    "ConfigError",
    "DegenerateRatesError",
    "InvalidTimingError",
    "InvalidStepError",
    "InvalidSweepError",
    "SingularDrawError",
    "ZFInfeasibleError",
    # model
    "Scheme",
    "Case",
    "Bottleneck",
    "DeliverySemantics",
    "VideoParams",
    "ResourceRates",
    "TimingParams",
    "DurationPlan",
    "SqueezeOutcome",
    "fov_bits",
    "segment_bit_targets",
    "require_matching_segments",
    # optimizer
    "OptimizationResult",
    "completion_rate",
    "unconstrained_optimum",
    "t_c_max",
    "optimize_durations",
    "baseline_plan",
    "grid_oracle",
    # regions
    "Region",
    "RegionVerdict",
    "SweepCell",
    "classify_region",
    "classify_case",
    "efficient_condition",
    "analyze",
    "sweep",
    # simulator
    "SimConfig",
    "SegmentOutcome",
    "squeeze_of_plan",
    "remaining_budget",
    "mtp_latency",
    "simulate",
    # channel
    "ChannelParams",
    "ComputeParams",
    "computing_rate",
    "power_allocation",
    "zf_beamformers",
    "zf_equivalent_gains",
    "rate_from_gains",
    "ensemble_average_rate",
    "equivalent_rate",
    # config / backends
    "Scenario",
    "SweepAxis",
    "load_scenario",
    "active_backend",
    "numba_available",
]
