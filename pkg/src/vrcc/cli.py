"""Batch command-line front-end emitting deterministic CSV or JSON.

Four subcommands: ``optimize`` reports the closed-form optimum and the
regime verdict for one scenario; ``sweep`` tabulates a 2-D rate grid;
``simulate`` replays the pipeline for each configured scheme; ``rates``
derives transmission and computing rates from the channel/compute blocks.
Identical scenario files (seeds included) produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from typing import Any, Callable

from .channel import computing_rate, ensemble_average_rate, equivalent_rate, power_allocation
from .config import Scenario, load_scenario
from .errors import ConfigError, VrccError
from .model import DurationPlan, Scheme
from .optimizer import baseline_plan, optimize_durations
from .regions import analyze, sweep
from .simulator import SimConfig, simulate

__all__ = ["main"]

VALID_SCHEMES = "optimal, opt-no-sp, equal-split, fixed:<t_cpt>:<t_com>"

Row = dict[str, Any]


def _plan_for_scheme(token, rates, timing, video) -> DurationPlan:
    if token == Scheme.OPTIMAL_WITH_SP.value:
        return optimize_durations(rates, timing, video).plan
    if token == Scheme.OPTIMAL_NO_SP.value:
        return baseline_plan(Scheme.OPTIMAL_NO_SP, rates, timing)
    if token == Scheme.EQUAL_SPLIT.value:
        return baseline_plan(Scheme.EQUAL_SPLIT, rates, timing)
    if token.startswith("fixed:"):
        parts = token.split(":")
        if len(parts) == 3:
            try:
                return DurationPlan(float(parts[1]), float(parts[2]), Scheme.FIXED)
            except ValueError as exc:
                raise ConfigError(f"bad scheme {token!r}: {exc}") from None
        raise ConfigError(
            f"bad scheme {token!r}: expected fixed:<t_cpt>:<t_com>"
        )
    raise ConfigError(f"unknown scheme {token!r}; valid schemes: {VALID_SCHEMES}")


def cmd_optimize(scenario: Scenario) -> tuple[list[str], list[Row]]:
    rates = scenario.resolved_rates()
    result = optimize_durations(rates, scenario.timing, scenario.video)
    verdict = analyze(rates, scenario.timing)
    row: Row = {
        "t_cpt_star": result.plan.t_cpt,
        "t_com_star": result.plan.t_com,
        "t_cpt_low": result.t_cpt_interval[0],
        "t_cpt_high": result.t_cpt_interval[1],
        "t_com_low": result.t_com_interval[0],
        "t_com_high": result.t_com_interval[1],
        "s_cc_star": result.s_cc_star,
        "case": result.case.value,
        "bottleneck": result.bottleneck.value,
        "region": verdict.region.value,
        "efficient": verdict.efficient_condition_holds,
    }
    return list(row.keys()), [row]


def cmd_sweep(scenario: Scenario) -> tuple[list[str], list[Row]]:
    if scenario.sweep_com is None or scenario.sweep_cpt is None:
        raise ConfigError("missing key: sweep")
    cells = sweep(
        scenario.sweep_com.values(),
        scenario.timing,
        scenario.video,
        cpt_axis=scenario.sweep_cpt.values(),
    )
    fieldnames = [
        "c_com_equiv",
        "c_cpt",
        "region",
        "case",
        "efficient",
        "s_cc_star",
        "t_cpt_star",
        "t_com_star",
    ]
    rows = [
        {
            "c_com_equiv": cell.c_com_equiv,
            "c_cpt": cell.c_cpt,
            "region": cell.verdict.region.value,
            "case": cell.verdict.case.value,
            "efficient": cell.verdict.efficient_condition_holds,
            "s_cc_star": cell.s_cc_star,
            "t_cpt_star": cell.t_cpt_star,
            "t_com_star": cell.t_com_star,
        }
        for cell in cells
    ]
    return fieldnames, rows


def cmd_simulate(scenario: Scenario) -> tuple[list[str], list[Row]]:
    if not scenario.schemes:
        raise ConfigError(f"schemes must be non-empty; valid schemes: {VALID_SCHEMES}")
    rates = scenario.resolved_rates()
    fieldnames = [
        "scheme",
        "segment_offset",
        "render_start",
        "render_finish",
        "tx_start",
        "tx_finish",
        "deadline",
        "lateness",
        "s_cc",
        "stalled",
        "mtp_latency",
    ]
    rows: list[Row] = []
    for token in scenario.schemes:
        plan = _plan_for_scheme(token, rates, scenario.timing, scenario.video)
        outcomes = simulate(
            SimConfig(
                plan=plan,
                rates=rates,
                video=scenario.video,
                timing=scenario.timing,
                delivery_semantics=scenario.delivery_semantics,
                horizon=scenario.horizon,
            )
        )
        for out in outcomes:
            rows.append(
                {
                    "scheme": token,
                    "segment_offset": out.segment_offset,
                    "render_start": out.render_start,
                    "render_finish": out.render_finish,
                    "tx_start": out.tx_start,
                    "tx_finish": out.tx_finish,
                    "deadline": out.deadline,
                    "lateness": out.lateness,
                    "s_cc": out.s_cc,
                    "stalled": out.stalled,
                    "mtp_latency": out.mtp_latency,
                }
            )
    return fieldnames, rows


def cmd_rates(scenario: Scenario) -> tuple[list[str], list[Row]]:
    if scenario.channel is None or scenario.compute is None:
        raise ConfigError("missing key: rates.channel (the rates subcommand needs derived rates)")
    channel = scenario.channel
    beta, per_user = power_allocation(channel)
    c_com = ensemble_average_rate(channel)
    rows: list[Row] = [
        {"key": "rng_seed", "value": channel.rng_seed},
        {"key": "mc_samples", "value": channel.mc_samples},
        {"key": "beta", "value": beta},
    ]
    rows.extend(
        {"key": f"per_user_power_{k}", "value": p} for k, p in enumerate(per_user)
    )
    rows.extend(
        [
            {"key": "ensemble_rate", "value": c_com},
            {"key": "equivalent_rate", "value": equivalent_rate(c_com, scenario.video)},
            {"key": "computing_rate", "value": computing_rate(scenario.compute)},
        ]
    )
    return ["key", "value"], rows


COMMANDS: dict[str, Callable[[Scenario], tuple[list[str], list[Row]]]] = {
    "optimize": cmd_optimize,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "rates": cmd_rates,
}


def _format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".6g")
    return str(value)


def _render_csv(fieldnames: list[str], rows: list[Row]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fieldnames)
    for row in rows:
        writer.writerow([_format_cell(row[name]) for name in fieldnames])
    return buf.getvalue()


def _render_json(fieldnames: list[str], rows: list[Row]) -> str:
    import json

    return json.dumps([{k: row[k] for k in fieldnames} for row in rows], indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vrcc",
        description=(
            "Joint computing/communication duration planning, regime "
            "classification, and pipeline replay for proactive VR streaming."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (
        ("optimize", "closed-form optimal durations and regime verdict"),
        ("sweep", "2-D rate sweep over the configured axes"),
        ("simulate", "per-segment pipeline replay for each scheme"),
        ("rates", "derive transmission/computing rates from channel blocks"),
    ):
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", required=True, help="scenario YAML file")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = load_scenario(args.config)
        fieldnames, rows = COMMANDS[args.command](scenario)
    except (VrccError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = (
        _render_json(fieldnames, rows)
        if args.format == "json"
        else _render_csv(fieldnames, rows)
    )
    if args.out is None:
        try:
            sys.stdout.write(text)
        except BrokenPipeError:
            # downstream consumer (e.g. head) closed the pipe; not an error
            # worth a traceback, but the output was truncated
            return 1
    else:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    return 0
