"""Event-driven replay of the proactive streaming pipeline.

Rendering and transmission are two FIFO single-server stages in tandem.
Segment n's source data becomes available at n*t_seg and its delivery
deadline sits at t_cc + n*t_seg; deadlines never move, a stalled segment
just plays out empty. A plan whose durations overrun the windows squeezes
every later segment by a constant per-segment amount, which is what the
closed-form lateness identity in the tests exploits.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    DeliverySemantics,
    DurationPlan,
    ResourceRates,
    SqueezeOutcome,
    TimingParams,
    VideoParams,
    require_matching_segments,
)
from .optimizer import completion_rate

__all__ = [
    "SimConfig",
    "SegmentOutcome",
    "squeeze_of_plan",
    "remaining_budget",
    "mtp_latency",
    "simulate",
]


@dataclass(frozen=True)
class SimConfig:
    """A plan plus the scenario it runs in.

    horizon counts proactively streamed segments, so it cannot exceed
    num_segments - first_proactive_index + 1.
    """

    plan: DurationPlan
    rates: ResourceRates
    video: VideoParams
    timing: TimingParams
    delivery_semantics: DeliverySemantics = DeliverySemantics.ALL_OR_NOTHING
    horizon: int = 1

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.horizon > self.timing.proactive_segments:
            raise ValueError(
                f"horizon {self.horizon} exceeds the {self.timing.proactive_segments}"
                " proactively streamed segments"
            )
        require_matching_segments(self.video, self.timing)


@dataclass(frozen=True)
class SegmentOutcome:
    """Timeline and delivery result for the segment at the given offset.

    Offsets are 0-based from the first proactive segment; all times are on
    the absolute timeline anchored at that segment's task start (0.0).
    """

    segment_offset: int
    render_start: float
    render_finish: float
    tx_start: float
    tx_finish: float
    deadline: float
    lateness: float
    s_cc: float
    stalled: bool
    mtp_latency: float


def squeeze_of_plan(plan: DurationPlan, t_seg: float) -> SqueezeOutcome:
    """Overrun of one segment's tasks into the next segment's windows.

    delta_p: rendering time past the segment window. delta_m: transmission
    time past the window left after rendering (rendering slack shields
    transmission, hence the max(-delta_p, 0) credit).
    """
    if not t_seg > 0.0:
        raise ValueError("t_seg must be positive")
    delta_p = plan.t_cpt - t_seg
    delta_m = plan.t_com - plan.t_cpt - max(-delta_p, 0.0)
    return SqueezeOutcome(
        delta_p=delta_p,
        delta_m=delta_m,
        per_segment_squeeze=max(delta_p, 0.0) + max(delta_m, 0.0),
    )


def remaining_budget(timing: TimingParams, squeeze: SqueezeOutcome, n: int) -> float:
    """Task-time budget left for the segment n offsets in: t_cc - n*squeeze.

    Negative values signal that accumulated squeeze has consumed the whole
    budget before this segment's tasks can even start.
    """
    if n < 0:
        raise ValueError("segment offset must be >= 0")
    return timing.t_cc - n * squeeze.per_segment_squeeze


def mtp_latency(plan: DurationPlan, squeeze: SqueezeOutcome, n: int) -> float:
    """Motion-to-photon latency of the nth proactively streamed segment (n >= 1).

    max(t_com + t_cpt - (n-1)*per_segment_squeeze, 0). Under a positive
    squeeze this decreases with n even though delivery gets later; the
    expression is kept verbatim rather than reinterpreted.
    """
    if n < 1:
        raise ValueError("segment count must be >= 1")
    raw = plan.t_com + plan.t_cpt - (n - 1) * squeeze.per_segment_squeeze
    return max(raw, 0.0)


def simulate(config: SimConfig) -> list[SegmentOutcome]:
    """Replay the two-stage pipeline over the configured horizon.

    Segment n's rendering may start at max(n*t_seg, previous render
    finish); its transmission at max(its render finish, previous
    transmission finish). Delivery is judged against the fixed deadline
    t_cc + n*t_seg under the configured semantics.
    """
    plan = config.plan
    timing = config.timing
    rates = config.rates
    t_seg = timing.t_seg
    squeeze = squeeze_of_plan(plan, t_seg)
    s_on_time = completion_rate(plan, rates, config.video)
    render_bits = config.video.render_bits_per_segment()
    truncate = config.delivery_semantics is DeliverySemantics.TRUNCATE

    outcomes: list[SegmentOutcome] = []
    prev_render_finish = 0.0
    prev_tx_finish = 0.0
    for n in range(config.horizon):
        render_start = max(n * t_seg, prev_render_finish)
        render_finish = render_start + plan.t_cpt
        tx_start = max(render_finish, prev_tx_finish)
        tx_finish = tx_start + plan.t_com
        deadline = timing.t_cc + n * t_seg
        lateness = tx_finish - deadline

        if truncate:
            render_eff = max(0.0, min(render_finish, deadline) - render_start)
            tx_eff = max(0.0, min(tx_finish, deadline) - tx_start)
            s_cc = min(rates.c_com_equiv * tx_eff, rates.c_cpt * render_eff)
            s_cc /= render_bits
            stalled = s_cc == 0.0
        else:
            # in exact arithmetic tx_finish(n) = t_cpt + t_com +
            # n*(t_seg + squeeze), so missing the deadline is the same as
            # the plan exceeding the remaining budget; deciding on that
            # closed form keeps an exactly on-time plan from drifting past
            # the deadline by accumulated rounding of the timestamps
            stalled = plan.total > remaining_budget(timing, squeeze, n)
            s_cc = 0.0 if stalled else s_on_time

        outcomes.append(
            SegmentOutcome(
                segment_offset=n,
                render_start=render_start,
                render_finish=render_finish,
                tx_start=tx_start,
                tx_finish=tx_finish,
                deadline=deadline,
                lateness=lateness,
                s_cc=s_cc,
                stalled=stalled,
                mtp_latency=mtp_latency(plan, squeeze, n + 1),
            )
        )
        prev_render_finish = render_finish
        prev_tx_finish = tx_finish
    return outcomes
