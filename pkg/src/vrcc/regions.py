"""Resource-configuration regime classification and 2-D rate sweeps.

The budget-to-window ratio alone decides the region: budgets above two
segment windows leave any unequal rate pair resource-limited; budgets
within one window always admit a genuine rate tradeoff; budgets in between
admit one conditionally, exactly when neither rate dominates the pair more
than the window fraction t_seg/t_cc.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import DegenerateRatesError, InvalidTimingError
from .model import Bottleneck, Case, ResourceRates, TimingParams, VideoParams
from .optimizer import optimize_durations, t_c_max

__all__ = [
    "Region",
    "RegionVerdict",
    "SweepCell",
    "classify_region",
    "classify_case",
    "efficient_condition",
    "analyze",
    "sweep",
]


class Region(Enum):
    """Budget regime relative to the segment window."""

    MINIMUM_RESOURCE_LIMITED = "minimum_resource_limited"
    UNCONDITIONAL_TRADEOFF = "unconditional_tradeoff"
    CONDITIONAL_TRADEOFF = "conditional_tradeoff"


@dataclass(frozen=True)
class RegionVerdict:
    """Joint classification of a (rates, timing) configuration.

    limiting_resource is set only in the resource-limited case and names
    the slower resource; at exactly equal rates it stays unset.
    """

    region: Region
    case: Case
    efficient_condition_holds: bool
    limiting_resource: Bottleneck | None = None


@dataclass(frozen=True)
class SweepCell:
    """One rate pair of a 2-D sweep with its verdict and optimum."""

    c_com_equiv: float
    c_cpt: float
    verdict: RegionVerdict
    s_cc_star: float
    t_cpt_star: float
    t_com_star: float


def classify_region(timing: TimingParams) -> Region:
    """Partition on the budget: (0, t_seg], (t_seg, 2*t_seg], (2*t_seg, inf)."""
    if timing.t_cc <= 0.0 or timing.t_seg <= 0.0:
        raise InvalidTimingError("t_cc and t_seg must be positive")
    if timing.t_cc > 2.0 * timing.t_seg:
        return Region.MINIMUM_RESOURCE_LIMITED
    if timing.t_cc <= timing.t_seg:
        return Region.UNCONDITIONAL_TRADEOFF
    return Region.CONDITIONAL_TRADEOFF


def classify_case(rates: ResourceRates, timing: TimingParams) -> Case:
    """Case 1 iff the larger unconstrained duration overflows the window."""
    if t_c_max(rates, timing) > timing.t_seg:
        return Case.CASE1_RESOURCE_LIMITED
    return Case.CASE2_TRADEOFF


def efficient_condition(rates: ResourceRates, timing: TimingParams) -> bool:
    """Whether max(rates)/sum(rates) <= t_seg/t_cc.

    Holding exactly when the configuration sits in the tradeoff case, this
    is the usable-without-waste test for a rate pair under the given
    timing. Uses the equivalent transmission rate on the communication
    side, keeping it on the same scale as the computing rate.
    """
    total = rates.c_com_equiv + rates.c_cpt
    if total == 0.0:
        raise DegenerateRatesError("both resource rates are zero")
    dominant = max(rates.c_com_equiv, rates.c_cpt)
    return dominant / total <= timing.t_seg / timing.t_cc


def analyze(rates: ResourceRates, timing: TimingParams) -> RegionVerdict:
    """Full verdict: region, case, efficiency, limiting resource."""
    case = classify_case(rates, timing)
    limiting: Bottleneck | None = None
    if case is Case.CASE1_RESOURCE_LIMITED:
        if rates.c_com_equiv < rates.c_cpt:
            limiting = Bottleneck.COMMUNICATION
        elif rates.c_com_equiv > rates.c_cpt:
            limiting = Bottleneck.COMPUTING
    return RegionVerdict(
        region=classify_region(timing),
        case=case,
        efficient_condition_holds=efficient_condition(rates, timing),
        limiting_resource=limiting,
    )


def sweep(
    rate_axis: Sequence[float],
    timing: TimingParams,
    video: VideoParams,
    cpt_axis: Sequence[float] | None = None,
) -> list[SweepCell]:
    """Cartesian product of rate pairs, row-major, one cell per pair.

    ``rate_axis`` supplies the communication values (outer/slow index) and,
    unless ``cpt_axis`` is given, the computing values too. A both-zero
    pair cannot be classified or optimized; its cell is emitted with zero
    value and durations, the tradeoff case, and no limiting resource,
    rather than failing the sweep.
    """
    com_values = [float(v) for v in rate_axis]
    cpt_values = com_values if cpt_axis is None else [float(v) for v in cpt_axis]
    for axis in (com_values, cpt_values):
        for v in axis:
            if not v >= 0.0:
                raise ValueError("axis values must be >= 0")
    region = classify_region(timing)
    cells: list[SweepCell] = []
    for com in com_values:
        for cpt in cpt_values:
            rates = ResourceRates(com, cpt)
            try:
                verdict = analyze(rates, timing)
                result = optimize_durations(rates, timing, video)
            except DegenerateRatesError:
                cells.append(
                    SweepCell(
                        c_com_equiv=com,
                        c_cpt=cpt,
                        verdict=RegionVerdict(
                            region=region,
                            case=Case.CASE2_TRADEOFF,
                            efficient_condition_holds=False,
                            limiting_resource=None,
                        ),
                        s_cc_star=0.0,
                        t_cpt_star=0.0,
                        t_com_star=0.0,
                    )
                )
                continue
            cells.append(
                SweepCell(
                    c_com_equiv=com,
                    c_cpt=cpt,
                    verdict=verdict,
                    s_cc_star=result.s_cc_star,
                    t_cpt_star=result.plan.t_cpt,
                    t_com_star=result.plan.t_com,
                )
            )
    return cells
