"""Closed-form joint duration optimization and its brute-force grid oracle.

The objective is the per-segment completion rate: the fraction of a
segment's predicted-FoV bits that both tasks finish, min over the two task
throughputs normalized by the render bit target. The constrained problem
caps each duration at the segment window (no squeezing into the next
segment) and the pair at the total budget. Its optimum has a two-case
closed form, discriminated by whether the larger unconstrained duration
fits inside one segment window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DegenerateRatesError,
    InvalidStepError,
    InvalidTimingError,
)
from .kernels import grid_scan
from .model import (
    Bottleneck,
    Case,
    DurationPlan,
    ResourceRates,
    Scheme,
    TimingParams,
    VideoParams,
)

__all__ = [
    "OptimizationResult",
    "completion_rate",
    "unconstrained_optimum",
    "t_c_max",
    "optimize_durations",
    "baseline_plan",
    "grid_oracle",
]


@dataclass(frozen=True)
class OptimizationResult:
    """Constrained optimum: point plan, optimal-duration intervals, value.

    When the optimum is unique both intervals are degenerate (x, x). In the
    resource-limited case one duration is pinned at the segment window and
    the other may range over an interval at no loss; the point plan sits at
    that interval's lower end.
    """

    plan: DurationPlan
    t_cpt_interval: tuple[float, float]
    t_com_interval: tuple[float, float]
    s_cc_star: float
    case: Case
    bottleneck: Bottleneck


def completion_rate(
    plan: DurationPlan, rates: ResourceRates, video: VideoParams
) -> float:
    """Fraction of the segment's FoV bits completed by both tasks.

    min(c_com_equiv*t_com, c_cpt*t_cpt) / render_bits_per_segment; may
    exceed 1 when the resources could stream more than the predicted FoVs.
    """
    done = min(rates.c_com_equiv * plan.t_com, rates.c_cpt * plan.t_cpt)
    return done / video.render_bits_per_segment()


def _unconstrained_components(
    rates: ResourceRates, timing: TimingParams
) -> tuple[float, float]:
    total = rates.c_com_equiv + rates.c_cpt
    if total == 0.0:
        raise DegenerateRatesError("both resource rates are zero")
    t_cpt = rates.c_com_equiv * timing.t_cc / total
    t_com = rates.c_cpt * timing.t_cc / total
    return t_cpt, t_com


def unconstrained_optimum(rates: ResourceRates, timing: TimingParams) -> DurationPlan:
    """Budget split ignoring the per-segment window caps.

    Durations are cross-proportional to the rates (the faster resource's
    task gets less time), balancing the two task throughputs exactly and
    spending the whole budget.
    """
    t_cpt, t_com = _unconstrained_components(rates, timing)
    return DurationPlan(t_cpt, t_com, Scheme.OPTIMAL_NO_SP)


def t_c_max(rates: ResourceRates, timing: TimingParams) -> float:
    """Larger of the two unconstrained optimal durations.

    Equals max(c_com_equiv, c_cpt) * t_cc / (c_com_equiv + c_cpt); with both
    rates positive it lies in [t_cc/2, t_cc). Deciding whether it fits in
    one segment window discriminates the closed form's two cases.
    """
    t_cpt, t_com = _unconstrained_components(rates, timing)
    return max(t_cpt, t_com)


def _shave_to_budget(keep: float, adjust: float, budget: float) -> float:
    # the real-valued sum equals the budget; rounding may leave the float
    # sum one or two ulps above it, which would violate feasibility exactly
    while keep + adjust > budget:
        adjust = math.nextafter(adjust, 0.0)
    return adjust


def optimize_durations(
    rates: ResourceRates, timing: TimingParams, video: VideoParams
) -> OptimizationResult:
    """Closed-form constrained optimum of the completion rate.

    Case 2 (larger unconstrained duration fits the window): the
    unconstrained split is returned unchanged and unique. Case 1: the
    slower resource's task saturates the segment window; the other duration
    may range over an interval, reported in full, with the point plan at
    the interval's lower end (earliest finish, maximal slack). The returned
    plan is feasible in exact float comparisons and produces zero squeeze.
    """
    if timing.t_cc <= 0.0 or timing.t_seg <= 0.0:
        raise InvalidTimingError("t_cc and t_seg must be positive")
    ct = rates.c_com_equiv
    cc = rates.c_cpt
    if ct == 0.0 and cc == 0.0:
        raise DegenerateRatesError("both resource rates are zero")
    t_cc = timing.t_cc
    t_seg = timing.t_seg

    if ct == 0.0 or cc == 0.0:
        # nothing completes; pick the canonical feasible plan that gives the
        # idle task no time and the working task the largest single window
        busy = min(t_cc, t_seg)
        if ct == 0.0:
            plan = DurationPlan(busy, 0.0, Scheme.OPTIMAL_WITH_SP)
            bottleneck = Bottleneck.COMMUNICATION
        else:
            plan = DurationPlan(0.0, busy, Scheme.OPTIMAL_WITH_SP)
            bottleneck = Bottleneck.COMPUTING
        case = (
            Case.CASE1_RESOURCE_LIMITED
            if t_c_max(rates, timing) > t_seg
            else Case.CASE2_TRADEOFF
        )
        return OptimizationResult(
            plan=plan,
            t_cpt_interval=(plan.t_cpt, plan.t_cpt),
            t_com_interval=(plan.t_com, plan.t_com),
            s_cc_star=completion_rate(plan, rates, video),
            case=case,
            bottleneck=bottleneck,
        )

    t_cpt_o, t_com_o = _unconstrained_components(rates, timing)
    if max(t_cpt_o, t_com_o) <= t_seg:
        # Case 2: the unconstrained split already respects the windows
        t_cpt, t_com = t_cpt_o, t_com_o
        while t_cpt + t_com > t_cc:
            if t_cpt >= t_com:
                t_cpt = math.nextafter(t_cpt, 0.0)
            else:
                t_com = math.nextafter(t_com, 0.0)
        plan = DurationPlan(t_cpt, t_com, Scheme.OPTIMAL_WITH_SP)
        return OptimizationResult(
            plan=plan,
            t_cpt_interval=(t_cpt, t_cpt),
            t_com_interval=(t_com, t_com),
            s_cc_star=completion_rate(plan, rates, video),
            case=Case.CASE2_TRADEOFF,
            bottleneck=Bottleneck.BALANCED,
        )

    # Case 1: saturate the slower resource's window
    t_min = min(t_cc - t_seg, t_seg)
    if ct >= cc:
        low = cc * t_seg / ct
        high = _shave_to_budget(t_seg, t_min, t_cc)
        low = min(low, high)
        plan = DurationPlan(t_seg, low, Scheme.OPTIMAL_WITH_SP)
        t_cpt_interval = (t_seg, t_seg)
        t_com_interval = (low, high)
        bottleneck = Bottleneck.BALANCED if ct == cc else Bottleneck.COMPUTING
    else:
        low = ct * t_seg / cc
        high = _shave_to_budget(t_seg, t_min, t_cc)
        low = min(low, high)
        plan = DurationPlan(low, t_seg, Scheme.OPTIMAL_WITH_SP)
        t_cpt_interval = (low, high)
        t_com_interval = (t_seg, t_seg)
        bottleneck = Bottleneck.COMMUNICATION
    return OptimizationResult(
        plan=plan,
        t_cpt_interval=t_cpt_interval,
        t_com_interval=t_com_interval,
        s_cc_star=completion_rate(plan, rates, video),
        case=Case.CASE1_RESOURCE_LIMITED,
        bottleneck=bottleneck,
    )


def baseline_plan(
    kind: Scheme, rates: ResourceRates, timing: TimingParams
) -> DurationPlan:
    """Reference schemes: the window-blind optimum or a 1:1 budget split."""
    if kind is Scheme.OPTIMAL_NO_SP:
        return unconstrained_optimum(rates, timing)
    if kind is Scheme.EQUAL_SPLIT:
        half = timing.t_cc / 2.0
        return DurationPlan(half, half, Scheme.EQUAL_SPLIT)
    raise ValueError(f"not a baseline scheme: {kind!r}")


def grid_oracle(
    rates: ResourceRates,
    timing: TimingParams,
    video: VideoParams,
    step: float,
) -> tuple[DurationPlan, float]:
    """Exhaustive lattice maximization of the completion rate.

    Evaluates every feasible (i*step, j*step) pair, breaking ties toward
    the smallest t_cpt and then the smallest t_com. Exists to check the
    closed form, not to replace it.
    """
    if not step > 0.0:
        raise InvalidStepError("step must be positive")
    if step > min(timing.t_cc, timing.t_seg):
        raise InvalidStepError(
            f"step {step!r} leaves no nonzero lattice point inside the "
            f"feasible box (t_cc={timing.t_cc!r}, t_seg={timing.t_seg!r})"
        )
    i, j, value = grid_scan(
        rates.c_com_equiv, rates.c_cpt, timing.t_cc, timing.t_seg, step
    )
    plan = DurationPlan(i * step, j * step, Scheme.FIXED)
    return plan, value / video.render_bits_per_segment()
