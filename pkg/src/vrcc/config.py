"""Scenario files: one YAML document describing a complete experiment.

Keys mirror the library's field names in lower_snake_case and units are
fixed (seconds, bits/second, watts, Hz) with no auto-conversion. The rates
block is either direct (``c_com_equiv``/``c_cpt``) or derived
(``channel``/``compute`` sub-blocks), never both. Numbers may be quoted or
written in exponent notation; anything float() accepts is taken.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .channel import ChannelParams, ComputeParams, computing_rate, ensemble_average_rate, equivalent_rate
from .errors import ConfigError, InvalidSweepError
from .model import (
    DeliverySemantics,
    ResourceRates,
    TimingParams,
    VideoParams,
    require_matching_segments,
)

__all__ = ["SweepAxis", "Scenario", "load_scenario"]


@dataclass(frozen=True)
class SweepAxis:
    """Inclusive linear axis: axis_steps evenly spaced values."""

    axis_min: float
    axis_max: float
    axis_steps: int

    def __post_init__(self) -> None:
        if self.axis_steps < 1:
            raise InvalidSweepError("axis_steps must be >= 1")
        if not self.axis_min <= self.axis_max:
            raise InvalidSweepError("axis_min must not exceed axis_max")
        if self.axis_min < 0.0:
            raise InvalidSweepError("sweep axis values must be >= 0")

    def values(self) -> list[float]:
        if self.axis_steps == 1:
            return [self.axis_min]
        return np.linspace(self.axis_min, self.axis_max, self.axis_steps).tolist()


@dataclass(frozen=True)
class Scenario:
    """Parsed scenario: typed parameter blocks plus experiment settings."""

    video: VideoParams
    timing: TimingParams
    rates: ResourceRates | None
    channel: ChannelParams | None
    compute: ComputeParams | None
    schemes: tuple[str, ...]
    delivery_semantics: DeliverySemantics
    horizon: int
    sweep_com: SweepAxis | None
    sweep_cpt: SweepAxis | None

    def resolved_rates(self) -> ResourceRates:
        """Direct rates, or rates derived from the channel/compute blocks."""
        if self.rates is not None:
            return self.rates
        if self.channel is not None and self.compute is not None:
            c_com = ensemble_average_rate(self.channel)
            return ResourceRates(
                c_com_equiv=equivalent_rate(c_com, self.video),
                c_cpt=computing_rate(self.compute),
            )
        raise ConfigError("missing key: rates")


def _as_map(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{path} must be a mapping")
    return value


def _require(mapping: dict, key: str, path: str) -> Any:
    if key not in mapping:
        raise ConfigError(f"missing key: {path}.{key}" if path else f"missing key: {key}")
    return mapping[key]


def _as_float(value: Any, path: str) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"{path} must be a number")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"{path} must be a number, got {value!r}") from None
    raise ConfigError(f"{path} must be a number, got {value!r}")


def _as_int(value: Any, path: str) -> int:
    if isinstance(value, bool):
        raise ConfigError(f"{path} must be an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"{path} must be an integer, got {value!r}") from None
    raise ConfigError(f"{path} must be an integer, got {value!r}")


def _float_key(mapping: dict, key: str, path: str) -> float:
    return _as_float(_require(mapping, key, path), f"{path}.{key}")


def _int_key(mapping: dict, key: str, path: str) -> int:
    return _as_int(_require(mapping, key, path), f"{path}.{key}")


def _parse_video(raw: dict) -> VideoParams:
    block = _as_map(_require(raw, "video", ""), "video")
    tiles = block.get("tiles_per_segment")
    return VideoParams(
        pixels_wide=_int_key(block, "pixels_wide", "video"),
        pixels_high=_int_key(block, "pixels_high", "video"),
        bits_per_pixel=_int_key(block, "bits_per_pixel", "video"),
        fov_ratio=_float_key(block, "fov_ratio", "video"),
        frame_rate=_float_key(block, "frame_rate", "video"),
        compression_ratio=_float_key(block, "compression_ratio", "video"),
        segment_duration=_float_key(block, "segment_duration", "video"),
        tiles_per_segment=None if tiles is None else _as_int(tiles, "video.tiles_per_segment"),
    )


def _parse_timing(raw: dict, video: VideoParams, horizon: int) -> TimingParams:
    block = _as_map(_require(raw, "timing", ""), "timing")
    t_seg = (
        video.segment_duration
        if "t_seg" not in block
        else _as_float(block["t_seg"], "timing.t_seg")
    )
    first = (
        1
        if "first_proactive_index" not in block
        else _as_int(block["first_proactive_index"], "timing.first_proactive_index")
    )
    default_segments = first + max(horizon, 1) - 1
    num_segments = (
        default_segments
        if "num_segments" not in block
        else _as_int(block["num_segments"], "timing.num_segments")
    )
    return TimingParams(
        t_cc=_float_key(block, "t_cc", "timing"),
        t_seg=t_seg,
        num_segments=num_segments,
        first_proactive_index=first,
    )


def _parse_channel(block: dict, path: str) -> ChannelParams:
    distances = _require(block, "distances", path)
    if not isinstance(distances, (list, tuple)):
        raise ConfigError(f"{path}.distances must be a list")
    kwargs = dict(
        num_users=_int_key(block, "num_users", path),
        num_antennas=_int_key(block, "num_antennas", path),
        bandwidth=_float_key(block, "bandwidth", path),
        total_power=_float_key(block, "total_power", path),
        noise_power=_float_key(block, "noise_power", path),
        pathloss_exponent=_float_key(block, "pathloss_exponent", path),
        distances=tuple(
            _as_float(d, f"{path}.distances[{i}]") for i, d in enumerate(distances)
        ),
        rng_seed=_int_key(block, "rng_seed", path),
    )
    if "mc_samples" in block:
        kwargs["mc_samples"] = _as_int(block["mc_samples"], f"{path}.mc_samples")
    return ChannelParams(**kwargs)


def _parse_compute(block: dict, path: str, channel: ChannelParams | None) -> ComputeParams:
    if "num_users" in block:
        num_users = _as_int(block["num_users"], f"{path}.num_users")
    elif channel is not None:
        num_users = channel.num_users
    else:
        raise ConfigError(f"missing key: {path}.num_users")
    if channel is not None and num_users != channel.num_users:
        raise ConfigError(
            f"{path}.num_users ({num_users}) disagrees with "
            f"rates.channel.num_users ({channel.num_users})"
        )
    return ComputeParams(
        total_flops=_float_key(block, "total_flops", path),
        num_users=num_users,
        render_intensity=_float_key(block, "render_intensity", path),
    )


def _parse_rates(
    raw: dict,
) -> tuple[ResourceRates | None, ChannelParams | None, ComputeParams | None]:
    if "rates" not in raw:
        return None, None, None
    block = _as_map(raw["rates"], "rates")
    direct_keys = {"c_com_equiv", "c_cpt"} & block.keys()
    derived_keys = {"channel", "compute"} & block.keys()
    if direct_keys and derived_keys:
        raise ConfigError(
            "rates must be either direct (c_com_equiv, c_cpt) or derived "
            "(channel, compute), not both"
        )
    if direct_keys:
        return (
            ResourceRates(
                c_com_equiv=_float_key(block, "c_com_equiv", "rates"),
                c_cpt=_float_key(block, "c_cpt", "rates"),
            ),
            None,
            None,
        )
    if derived_keys:
        channel = _parse_channel(
            _as_map(_require(block, "channel", "rates"), "rates.channel"),
            "rates.channel",
        )
        compute = _parse_compute(
            _as_map(_require(block, "compute", "rates"), "rates.compute"),
            "rates.compute",
            channel,
        )
        return None, channel, compute
    raise ConfigError(
        "rates must contain either direct keys (c_com_equiv, c_cpt) or "
        "derived blocks (channel, compute)"
    )


def _parse_sweep_axis(block: dict, path: str) -> SweepAxis:
    return SweepAxis(
        axis_min=_float_key(block, "axis_min", path),
        axis_max=_float_key(block, "axis_max", path),
        axis_steps=_int_key(block, "axis_steps", path),
    )


def _parse_sweep(raw: dict) -> tuple[SweepAxis | None, SweepAxis | None]:
    if "sweep" not in raw:
        return None, None
    block = _as_map(raw["sweep"], "sweep")
    if "axis_min" in block or "axis_max" in block or "axis_steps" in block:
        shared = _parse_sweep_axis(block, "sweep")
        return shared, shared
    com = _parse_sweep_axis(
        _as_map(_require(block, "c_com_equiv", "sweep"), "sweep.c_com_equiv"),
        "sweep.c_com_equiv",
    )
    cpt = _parse_sweep_axis(
        _as_map(_require(block, "c_cpt", "sweep"), "sweep.c_cpt"),
        "sweep.c_cpt",
    )
    return com, cpt


def load_scenario(path: str | Path) -> Scenario:
    """Parse and validate one scenario file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"unparseable scenario file {path}: {exc}") from exc
    if raw is None:
        raw = {}
    raw = _as_map(raw, "scenario")

    video = _parse_video(raw)

    delivery = DeliverySemantics.ALL_OR_NOTHING
    horizon = 1
    if "simulation" in raw:
        sim = _as_map(raw["simulation"], "simulation")
        if "delivery_semantics" in sim:
            token = sim["delivery_semantics"]
            try:
                delivery = DeliverySemantics(token)
            except ValueError:
                valid = ", ".join(s.value for s in DeliverySemantics)
                raise ConfigError(
                    f"simulation.delivery_semantics must be one of: {valid}; "
                    f"got {token!r}"
                ) from None
        if "horizon" in sim:
            horizon = _as_int(sim["horizon"], "simulation.horizon")

    timing = _parse_timing(raw, video, horizon)
    require_matching_segments(video, timing)
    rates, channel, compute = _parse_rates(raw)
    sweep_com, sweep_cpt = _parse_sweep(raw)

    schemes_raw = raw.get("schemes", [])
    if not isinstance(schemes_raw, (list, tuple)):
        raise ConfigError("schemes must be a list of scheme identifiers")
    schemes = tuple(str(s) for s in schemes_raw)

    return Scenario(
        video=video,
        timing=timing,
        rates=rates,
        channel=channel,
        compute=compute,
        schemes=schemes,
        delivery_semantics=delivery,
        horizon=horizon,
        sweep_com=sweep_com,
        sweep_cpt=sweep_cpt,
    )
