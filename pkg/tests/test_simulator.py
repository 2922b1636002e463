"""Squeeze accounting and pipeline-replay tests."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_hd_video, make_timing
from vrcc import (
    ConfigError,
    DeliverySemantics,
    DurationPlan,
    ResourceRates,
    SimConfig,
    TimingParams,
    VideoParams,
    baseline_plan,
    completion_rate,
    mtp_latency,
    optimize_durations,
    remaining_budget,
    simulate,
    squeeze_of_plan,
    unconstrained_optimum,
)
from vrcc.model import Scheme

VIDEO = make_hd_video()
RATES = ResourceRates(900e6, 400e6)


def sim_video(t_seg):
    return VideoParams(100, 100, 8, 0.5, 30.0, 2.0, t_seg)


class TestSqueezeOfPlan:
    def test_window_blind_plan_budget_1p5(self):
        plan = unconstrained_optimum(RATES, make_timing(1.5))
        outcome = squeeze_of_plan(plan, 1.0)
        assert outcome.delta_p == pytest.approx(0.038462, abs=1e-6)
        assert outcome.delta_m == pytest.approx(-0.576923, abs=1e-6)
        assert outcome.per_segment_squeeze == pytest.approx(0.038462, abs=1e-6)

    def test_equal_split_budget_0p9_has_slack_everywhere(self):
        outcome = squeeze_of_plan(DurationPlan(0.45, 0.45), 1.0)
        assert outcome.delta_p == pytest.approx(-0.55, abs=1e-12)
        assert outcome.delta_m == pytest.approx(-0.55, abs=1e-12)
        assert outcome.per_segment_squeeze == 0.0

    def test_window_saturating_plan_has_zero_squeeze(self):
        outcome = squeeze_of_plan(DurationPlan(1.0, 1.0), 1.0)
        assert outcome.delta_p == 0.0
        assert outcome.delta_m == 0.0
        assert outcome.per_segment_squeeze == 0.0

    def test_transmission_overrun_alone(self):
        # rendering slack 0.4 shields transmission: delta_m = 1.2 - 0.6 - 0.4
        outcome = squeeze_of_plan(DurationPlan(0.6, 1.2), 1.0)
        assert outcome.delta_p == pytest.approx(-0.4, abs=1e-12)
        assert outcome.delta_m == pytest.approx(0.2, abs=1e-12)
        assert outcome.per_segment_squeeze == pytest.approx(0.2, abs=1e-12)

    def test_both_overruns_add_up(self):
        outcome = squeeze_of_plan(DurationPlan(1.25, 1.5), 1.0)
        assert outcome.delta_p == 0.25
        assert outcome.delta_m == 0.25
        assert outcome.per_segment_squeeze == 0.5

    def test_nonpositive_window_rejected(self):
        with pytest.raises(ValueError):
            squeeze_of_plan(DurationPlan(0.5, 0.5), 0.0)


class TestRemainingBudget:
    def test_offset_zero_is_the_full_budget(self):
        squeeze = squeeze_of_plan(DurationPlan(0.45, 0.45), 1.0)
        assert remaining_budget(make_timing(1.5), squeeze, 0) == 1.5

    def test_shrinks_linearly_under_squeeze(self):
        plan = unconstrained_optimum(RATES, make_timing(1.5))
        squeeze = squeeze_of_plan(plan, 1.0)
        timing = make_timing(1.5)
        assert remaining_budget(timing, squeeze, 3) == pytest.approx(1.384615, abs=1e-6)
        assert remaining_budget(timing, squeeze, 31) == pytest.approx(0.307692, abs=1e-6)

    def test_may_go_negative(self):
        squeeze = squeeze_of_plan(DurationPlan(1.5, 2.5), 1.0)
        assert squeeze.per_segment_squeeze == 1.5
        assert remaining_budget(make_timing(1.5), squeeze, 2) == -1.5

    def test_negative_offset_rejected(self):
        squeeze = squeeze_of_plan(DurationPlan(0.5, 0.5), 1.0)
        with pytest.raises(ValueError):
            remaining_budget(make_timing(1.5), squeeze, -1)


class TestMtpLatency:
    def test_first_segment_sees_the_plan_total(self):
        plan = unconstrained_optimum(RATES, make_timing(1.5))
        squeeze = squeeze_of_plan(plan, 1.0)
        assert mtp_latency(plan, squeeze, 1) == pytest.approx(1.5, abs=1e-9)

    def test_decreases_under_positive_squeeze(self):
        plan = unconstrained_optimum(RATES, make_timing(1.5))
        squeeze = squeeze_of_plan(plan, 1.0)
        assert mtp_latency(plan, squeeze, 4) == pytest.approx(1.384615, abs=1e-6)

    def test_constant_without_squeeze(self):
        plan = DurationPlan(1.0, 0.5)
        squeeze = squeeze_of_plan(plan, 1.0)
        for n in (1, 2, 10, 1000):
            assert mtp_latency(plan, squeeze, n) == 1.5

    def test_clamped_at_zero(self):
        plan = DurationPlan(1.5, 1.5)
        squeeze = squeeze_of_plan(plan, 1.0)
        assert mtp_latency(plan, squeeze, 100) == 0.0

    def test_counts_from_one(self):
        plan = DurationPlan(0.5, 0.5)
        squeeze = squeeze_of_plan(plan, 1.0)
        with pytest.raises(ValueError):
            mtp_latency(plan, squeeze, 0)


def run(plan, t_cc, t_seg=1.0, horizon=4, semantics=DeliverySemantics.ALL_OR_NOTHING,
        rates=RATES, video=VIDEO):
    timing = TimingParams(t_cc=t_cc, t_seg=t_seg, num_segments=horizon)
    return simulate(
        SimConfig(
            plan=plan,
            rates=rates,
            video=video,
            timing=timing,
            delivery_semantics=semantics,
            horizon=horizon,
        )
    )


class TestSimulateExamples:
    def test_window_respecting_plan_never_stalls(self):
        outcomes = run(DurationPlan(1.0, 0.5), t_cc=1.5)
        for n, out in enumerate(outcomes):
            assert out.segment_offset == n
            assert not out.stalled
            assert out.lateness == 0.0
            assert out.s_cc == pytest.approx(0.66980, abs=1e-4)
            assert out.deadline == 1.5 + n * 1.0
            assert out.mtp_latency == 1.5

    def test_window_blind_plan_stalls_from_the_second_segment(self):
        plan = unconstrained_optimum(RATES, make_timing(1.5))
        outcomes = run(plan, t_cc=1.5)
        first = outcomes[0]
        assert not first.stalled
        assert first.s_cc == pytest.approx(0.69556, abs=1e-5)
        for n, out in enumerate(outcomes[1:], start=1):
            assert out.stalled
            assert out.s_cc == 0.0
            assert out.lateness == pytest.approx(n * 0.038462, abs=1e-5)

    def test_equal_split_budget_2p1_rides_the_deadline_then_stalls(self):
        outcomes = run(DurationPlan(1.05, 1.05), t_cc=2.1)
        assert not outcomes[0].stalled
        assert outcomes[0].tx_finish == outcomes[0].deadline
        for n, out in enumerate(outcomes[1:], start=1):
            assert out.stalled
            assert out.lateness == pytest.approx(n * 0.05, abs=1e-9)

    def test_pipeline_timestamps_follow_the_stage_recursion(self):
        plan = DurationPlan(1.2, 0.3)
        outcomes = run(plan, t_cc=1.6)
        # rendering saturates: each start waits for the previous finish
        assert outcomes[0].render_start == 0.0
        for prev, out in zip(outcomes, outcomes[1:]):
            assert out.render_start == max(out.segment_offset * 1.0, prev.render_finish)
            assert out.tx_start == max(out.render_finish, prev.tx_finish)

    def test_mtp_latency_column_matches_the_formula(self):
        plan = unconstrained_optimum(RATES, make_timing(1.5))
        squeeze = squeeze_of_plan(plan, 1.0)
        outcomes = run(plan, t_cc=1.5)
        for out in outcomes:
            assert out.mtp_latency == mtp_latency(plan, squeeze, out.segment_offset + 1)


class TestTruncateSemantics:
    def test_partial_credit_on_a_late_segment(self):
        # transmission-bound rates so clipping the transmission window is
        # what costs credit
        rates = ResourceRates(400e6, 900e6)
        plan = DurationPlan(1.05, 1.05)
        all_or_nothing = run(
            plan, t_cc=2.1, semantics=DeliverySemantics.ALL_OR_NOTHING, rates=rates
        )
        truncate = run(plan, t_cc=2.1, semantics=DeliverySemantics.TRUNCATE, rates=rates)
        assert all_or_nothing[1].s_cc == 0.0
        assert all_or_nothing[1].stalled
        late = truncate[1]
        assert not late.stalled
        assert 0.0 < late.s_cc < truncate[0].s_cc

    def test_agrees_with_all_or_nothing_when_on_time(self):
        plan = DurationPlan(1.0, 0.5)
        aon = run(plan, t_cc=1.5, semantics=DeliverySemantics.ALL_OR_NOTHING)
        trunc = run(plan, t_cc=1.5, semantics=DeliverySemantics.TRUNCATE)
        for a, t in zip(aon, trunc):
            assert t.s_cc == pytest.approx(a.s_cc, rel=1e-9)
            assert not t.stalled

    def test_stalls_only_when_nothing_fits_before_the_deadline(self):
        # the transmission queue drifts 0.1 s per segment; from offset 1 on
        # it starts past the deadline and delivers nothing
        plan = DurationPlan(1.0, 1.2)
        outcomes = run(plan, t_cc=1.1, horizon=6, semantics=DeliverySemantics.TRUNCATE)
        assert outcomes[0].s_cc > 0.0
        assert not outcomes[0].stalled
        for out in outcomes[1:]:
            assert out.s_cc == 0.0
            assert out.stalled
        for out in outcomes:
            assert out.stalled == (out.s_cc == 0.0)


class TestSimConfigValidation:
    def test_horizon_must_be_positive(self):
        with pytest.raises(ValueError):
            SimConfig(
                plan=DurationPlan(0.5, 0.5),
                rates=RATES,
                video=VIDEO,
                timing=make_timing(1.5),
                horizon=0,
            )

    def test_horizon_capped_by_proactive_segments(self):
        timing = TimingParams(1.5, 1.0, num_segments=6, first_proactive_index=4)
        with pytest.raises(ValueError):
            SimConfig(
                plan=DurationPlan(0.5, 0.5),
                rates=RATES,
                video=VIDEO,
                timing=timing,
                horizon=4,
            )

    def test_segment_duration_mismatch_rejected(self):
        with pytest.raises(ConfigError):
            SimConfig(
                plan=DurationPlan(0.5, 0.5),
                rates=RATES,
                video=VIDEO,
                timing=TimingParams(1.5, 0.5, num_segments=4),
                horizon=2,
            )


def quadrant_plan(t_seg, render_overruns, transmit_overruns, u1, u2):
    t_cpt = t_seg * (1.05 + 0.9 * u1) if render_overruns else t_seg * (0.15 + 0.8 * u1)
    gate = max(t_seg, t_cpt)
    t_com = gate * (1.05 + 0.9 * u2) if transmit_overruns else gate * (0.15 + 0.8 * u2)
    return DurationPlan(t_cpt, t_com)


@given(
    t_seg=st.floats(min_value=0.3, max_value=1.5),
    mult=st.floats(min_value=0.5, max_value=2.5),
    render_overruns=st.booleans(),
    transmit_overruns=st.booleans(),
    u1=st.floats(min_value=0.0, max_value=1.0),
    u2=st.floats(min_value=0.0, max_value=1.0),
)
@settings(max_examples=100, deadline=None)
def test_transmission_finish_has_a_closed_form(
    t_seg, mult, render_overruns, transmit_overruns, u1, u2
):
    plan = quadrant_plan(t_seg, render_overruns, transmit_overruns, u1, u2)
    squeeze = squeeze_of_plan(plan, t_seg)
    t_cc = mult * t_seg
    timing = TimingParams(t_cc=t_cc, t_seg=t_seg, num_segments=8)
    config = SimConfig(
        plan=plan, rates=RATES, video=sim_video(t_seg), timing=timing, horizon=8
    )
    for out in simulate(config):
        n = out.segment_offset
        expected = plan.t_cpt + plan.t_com + n * (t_seg + squeeze.per_segment_squeeze)
        assert out.tx_finish == pytest.approx(expected, abs=1e-9)


@given(
    t_seg=st.floats(min_value=0.3, max_value=1.5),
    mult=st.floats(min_value=0.5, max_value=2.5),
    render_overruns=st.booleans(),
    transmit_overruns=st.booleans(),
    u1=st.floats(min_value=0.0, max_value=1.0),
    u2=st.floats(min_value=0.0, max_value=1.0),
)
@settings(max_examples=100, deadline=None)
def test_stalls_happen_exactly_when_the_remaining_budget_runs_out(
    t_seg, mult, render_overruns, transmit_overruns, u1, u2
):
    plan = quadrant_plan(t_seg, render_overruns, transmit_overruns, u1, u2)
    squeeze = squeeze_of_plan(plan, t_seg)
    timing = TimingParams(t_cc=mult * t_seg, t_seg=t_seg, num_segments=8)
    config = SimConfig(
        plan=plan, rates=RATES, video=sim_video(t_seg), timing=timing, horizon=8
    )
    for out in simulate(config):
        remaining = remaining_budget(timing, squeeze, out.segment_offset)
        if abs(plan.total - remaining) < 1e-9:
            # an exact tie can round apart between the two float
            # expressions; the equivalence is about the open halves
            continue
        assert out.stalled == (plan.total > remaining)


@given(
    t_seg=st.floats(min_value=0.3, max_value=1.5),
    u1=st.floats(min_value=0.0, max_value=1.0),
    u2=st.floats(min_value=0.0, max_value=1.0),
)
@settings(max_examples=60, deadline=None)
def test_squeeze_free_plans_within_budget_never_degrade(t_seg, u1, u2):
    plan = quadrant_plan(t_seg, False, False, u1, u2)
    assert squeeze_of_plan(plan, t_seg).per_segment_squeeze == 0.0
    t_cc = plan.total * 1.01 + 1e-6
    timing = TimingParams(t_cc=t_cc, t_seg=t_seg, num_segments=10)
    config = SimConfig(
        plan=plan, rates=RATES, video=sim_video(t_seg), timing=timing, horizon=10
    )
    outcomes = simulate(config)
    assert all(not out.stalled for out in outcomes)
    assert len({out.s_cc for out in outcomes}) == 1
    assert all(out.mtp_latency == plan.total for out in outcomes)


@given(
    t_seg=st.floats(min_value=0.3, max_value=1.5),
    mult=st.floats(min_value=0.5, max_value=2.5),
    render_overruns=st.booleans(),
    transmit_overruns=st.booleans(),
    u1=st.floats(min_value=0.0, max_value=1.0),
    u2=st.floats(min_value=0.0, max_value=1.0),
)
@settings(max_examples=60, deadline=None)
def test_degradation_is_monotone_under_all_or_nothing(
    t_seg, mult, render_overruns, transmit_overruns, u1, u2
):
    plan = quadrant_plan(t_seg, render_overruns, transmit_overruns, u1, u2)
    timing = TimingParams(t_cc=mult * t_seg, t_seg=t_seg, num_segments=8)
    config = SimConfig(
        plan=plan, rates=RATES, video=sim_video(t_seg), timing=timing, horizon=8
    )
    outcomes = simulate(config)
    stalled_seen = False
    for out in outcomes:
        if stalled_seen:
            assert out.stalled
        stalled_seen = stalled_seen or out.stalled


@given(
    t_seg=st.floats(min_value=0.3, max_value=1.5),
    mult=st.floats(min_value=0.5, max_value=2.5),
    render_overruns=st.booleans(),
    transmit_overruns=st.booleans(),
    u1=st.floats(min_value=0.0, max_value=1.0),
    u2=st.floats(min_value=0.0, max_value=1.0),
)
@settings(max_examples=60, deadline=None)
def test_truncate_never_beats_on_time_delivery(
    t_seg, mult, render_overruns, transmit_overruns, u1, u2
):
    plan = quadrant_plan(t_seg, render_overruns, transmit_overruns, u1, u2)
    video = sim_video(t_seg)
    timing = TimingParams(t_cc=mult * t_seg, t_seg=t_seg, num_segments=8)
    on_time_value = completion_rate(plan, RATES, video)
    config = SimConfig(
        plan=plan,
        rates=RATES,
        video=video,
        timing=timing,
        delivery_semantics=DeliverySemantics.TRUNCATE,
        horizon=8,
    )
    for out in simulate(config):
        assert out.s_cc >= 0.0
        assert out.s_cc <= on_time_value * (1.0 + 1e-12) + 1e-15


def test_optimizer_plan_survives_the_full_horizon():
    result = optimize_durations(RATES, make_timing(1.5, num_segments=12), VIDEO)
    outcomes = run(result.plan, t_cc=1.5, horizon=12)
    assert all(not out.stalled for out in outcomes)
    assert all(out.s_cc == result.s_cc_star for out in outcomes)


def test_baseline_equal_split_budget_0p9_is_stall_free():
    plan = baseline_plan(Scheme.EQUAL_SPLIT, RATES, make_timing(0.9))
    outcomes = run(plan, t_cc=0.9)
    assert all(not out.stalled for out in outcomes)
    assert outcomes[0].s_cc == pytest.approx(0.30141, abs=1e-4)
