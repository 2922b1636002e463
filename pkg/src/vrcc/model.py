"""Shared domain types and derived per-segment bit targets.

Unit conventions used across the package: all times are seconds, all rates
are bits/second, both as double-precision floats. Nothing in the model
quantizes to milliseconds; the CLI may round for display only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import ConfigError

__all__ = [
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
]


class Scheme(Enum):
    """Provenance of a duration plan. Values double as CLI identifiers."""

    OPTIMAL_WITH_SP = "optimal"
    OPTIMAL_NO_SP = "opt-no-sp"
    EQUAL_SPLIT = "equal-split"
    FIXED = "fixed"


class Case(Enum):
    """Which branch of the closed-form optimum applies.

    Case 1: the larger unconstrained duration exceeds the segment window,
    so one task saturates its window and the slower resource caps the
    completion rate. Case 2: the unconstrained optimum is feasible as is.
    """

    CASE1_RESOURCE_LIMITED = "case1_resource_limited"
    CASE2_TRADEOFF = "case2_tradeoff"


class Bottleneck(Enum):
    """Which resource caps the optimal completion rate."""

    COMMUNICATION = "communication"
    COMPUTING = "computing"
    BALANCED = "balanced"


class DeliverySemantics(Enum):
    """What a segment delivers when its tasks overrun the deadline.

    ALL_OR_NOTHING: a late segment delivers nothing and stalls playback.
    TRUNCATE: task time past the deadline is cut off and the bits finished
    in time count as partial credit.
    """

    ALL_OR_NOTHING = "all_or_nothing"
    TRUNCATE = "truncate"


@dataclass(frozen=True)
class VideoParams:
    """Frame geometry and playback parameters of the streamed video.

    Attributes:
        pixels_wide: Horizontal resolution of a full panoramic frame.
        pixels_high: Vertical resolution of a full panoramic frame.
        bits_per_pixel: Color depth in bits per pixel.
        fov_ratio: Fraction of a frame covered by one field of view, in (0, 1].
        frame_rate: Frames per second, > 0.
        compression_ratio: Video compression ratio, >= 1 (1 means uncompressed).
        segment_duration: Playback duration of one segment in seconds, > 0.
        tiles_per_segment: Spatial tile count; recorded but never used in any
            computation (inert metadata).
    """

    pixels_wide: int
    pixels_high: int
    bits_per_pixel: int
    fov_ratio: float
    frame_rate: float
    compression_ratio: float
    segment_duration: float
    tiles_per_segment: int | None = None

    def __post_init__(self) -> None:
        if self.pixels_wide <= 0 or self.pixels_high <= 0:
            raise ValueError("pixel dimensions must be positive")
        if self.bits_per_pixel <= 0:
            raise ValueError("bits_per_pixel must be positive")
        if not 0.0 < self.fov_ratio <= 1.0:
            raise ValueError("fov_ratio must lie in (0, 1]")
        if self.frame_rate <= 0.0:
            raise ValueError("frame_rate must be positive")
        if self.compression_ratio < 1.0:
            raise ValueError("compression_ratio must be >= 1")
        if self.segment_duration <= 0.0:
            raise ValueError("segment_duration must be positive")
        if self.tiles_per_segment is not None and self.tiles_per_segment <= 0:
            raise ValueError("tiles_per_segment must be positive when given")

    def fov_bits(self) -> float:
        """Bits in a single field of view: fov_ratio * width * height * depth."""
        return self.fov_ratio * self.pixels_wide * self.pixels_high * self.bits_per_pixel

    def transmit_bits_per_segment(self) -> float:
        """Bits that must be transmitted for one segment's predicted FoVs."""
        return self.fov_bits() * self.frame_rate * self.segment_duration / self.compression_ratio

    def render_bits_per_segment(self) -> float:
        """Bits that must be rendered for one segment's predicted FoVs."""
        return self.fov_bits() * self.frame_rate * self.segment_duration


@dataclass(frozen=True)
class ResourceRates:
    """Per-user resource rates, both in bits/second.

    `c_com_equiv` is the equivalent transmission rate (physical rate scaled
    by the compression ratio); `c_cpt` is the computing (rendering) rate.
    """

    c_com_equiv: float
    c_cpt: float

    def __post_init__(self) -> None:
        for name in ("c_com_equiv", "c_cpt"):
            value = getattr(self, name)
            if not value >= 0.0 or value != value or value == float("inf"):
                raise ValueError(f"{name} must be finite and >= 0")


@dataclass(frozen=True)
class TimingParams:
    """Time budgets and segment bookkeeping for proactive streaming.

    Attributes:
        t_cc: Total per-segment budget for computing plus communication, seconds.
        t_seg: Segment playback duration, seconds (mirrors VideoParams).
        num_segments: Total segments L in the video.
        first_proactive_index: Index l of the first proactively streamed
            segment, in [1, num_segments].
    """

    t_cc: float
    t_seg: float
    num_segments: int = 1
    first_proactive_index: int = 1

    def __post_init__(self) -> None:
        if self.t_cc <= 0.0:
            raise ValueError("t_cc must be positive")
        if self.t_seg <= 0.0:
            raise ValueError("t_seg must be positive")
        if self.num_segments < 1:
            raise ValueError("num_segments must be >= 1")
        if not 1 <= self.first_proactive_index <= self.num_segments:
            raise ValueError("first_proactive_index must lie in [1, num_segments]")

    @property
    def proactive_segments(self) -> int:
        """Number of proactively streamed segments (l through L)."""
        return self.num_segments - self.first_proactive_index + 1


@dataclass(frozen=True)
class DurationPlan:
    """A (computing duration, communication duration) pair with provenance."""

    t_cpt: float
    t_com: float
    scheme: Scheme = Scheme.FIXED

    def __post_init__(self) -> None:
        if self.t_cpt < 0.0 or self.t_com < 0.0:
            raise ValueError("plan durations must be >= 0")

    @property
    def total(self) -> float:
        return self.t_cpt + self.t_com


@dataclass(frozen=True)
class SqueezeOutcome:
    """Per-segment overrun of a plan into the next segment's task windows.

    `delta_p` is the rendering overrun past the segment window, `delta_m`
    the transmission overrun; both may be negative (slack). The per-segment
    squeeze is the total positive overrun, max(delta_p, 0) + max(delta_m, 0).
    """

    delta_p: float
    delta_m: float
    per_segment_squeeze: float = field(default=0.0)

    def __post_init__(self) -> None:
        expected = max(self.delta_p, 0.0) + max(self.delta_m, 0.0)
        if self.per_segment_squeeze != expected:
            raise ValueError("per_segment_squeeze must equal (delta_p)+ + (delta_m)+")


def fov_bits(video: VideoParams) -> float:
    """Bits in one field of view for the given video parameters."""
    return video.fov_bits()


def segment_bit_targets(video: VideoParams) -> tuple[float, float]:
    """Per-segment bit targets as (transmit_bits, render_bits).

    The transmit target is the render target divided by the compression
    ratio; with compression_ratio == 1 the two coincide.
    """
    return video.transmit_bits_per_segment(), video.render_bits_per_segment()


def require_matching_segments(video: VideoParams, timing: TimingParams) -> None:
    """Reject configurations whose two copies of the segment duration disagree.

    VideoParams carries the segment duration for bit accounting and
    TimingParams mirrors it for deadline bookkeeping; the two must be the
    exact same float.
    """
    if video.segment_duration != timing.t_seg:
        raise ConfigError(
            "segment duration mismatch: video.segment_duration="
            f"{video.segment_duration!r} but timing.t_seg={timing.t_seg!r}"
        )
