"""Multiuser downlink rate model and per-user computing rate.

The transmitter nulls inter-user interference with zero-forcing
beamformers; transmit power compensates path loss so every user sees the
same received power, making the ensemble-average rate identical across
users. Rates come out of a seeded Monte-Carlo average over iid standard
complex Gaussian channel draws; absolute calibration of the large-scale
constants (pathloss exponent, noise power) is a configuration input, not a
model output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import SingularDrawError, ZFInfeasibleError
from .model import VideoParams

__all__ = [
    "ChannelParams",
    "ComputeParams",
    "computing_rate",
    "power_allocation",
    "zf_beamformers",
    "zf_equivalent_gains",
    "rate_from_gains",
    "ensemble_average_rate",
    "equivalent_rate",
]

_CHUNK_DRAWS = 65536
_MAX_REDRAW_ROUNDS = 8


@dataclass(frozen=True)
class ChannelParams:
    """Downlink configuration for the Monte-Carlo rate estimate.

    The seed is mandatory: every estimate must be reproducible. Draws are
    consumed in a fixed chunked order, so a given (params, seed) pair gives
    a bit-identical rate on every run and backend-independent inputs.
    """

    num_users: int
    num_antennas: int
    bandwidth: float
    total_power: float
    noise_power: float
    pathloss_exponent: float
    distances: tuple[float, ...]
    rng_seed: int
    mc_samples: int = 100_000

    def __post_init__(self) -> None:
        if self.num_users < 1:
            raise ValueError("num_users must be >= 1")
        if self.num_antennas < self.num_users:
            raise ZFInfeasibleError(
                f"zero-forcing needs num_antennas >= num_users, got "
                f"{self.num_antennas} < {self.num_users}"
            )
        for name in ("bandwidth", "total_power", "noise_power", "pathloss_exponent"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        object.__setattr__(self, "distances", tuple(float(d) for d in self.distances))
        if len(self.distances) != self.num_users:
            raise ValueError("distances must list one distance per user")
        if any(not d > 0.0 for d in self.distances):
            raise ValueError("distances must be positive")
        if self.mc_samples < 1:
            raise ValueError("mc_samples must be >= 1")


@dataclass(frozen=True)
class ComputeParams:
    """Shared computing capacity split evenly across users."""

    total_flops: float
    num_users: int
    render_intensity: float

    def __post_init__(self) -> None:
        if not self.total_flops > 0.0:
            raise ValueError("total_flops must be positive")
        if self.num_users < 1:
            raise ValueError("num_users must be >= 1")
        if not self.render_intensity > 0.0:
            raise ValueError("render_intensity must be positive")


def computing_rate(p: ComputeParams) -> float:
    """Per-user rendering throughput: total_flops / (num_users * render_intensity)."""
    return p.total_flops / (p.num_users * p.render_intensity)


def power_allocation(p: ChannelParams) -> tuple[float, list[float]]:
    """Path-loss-compensating split of the total power.

    Returns (beta, per_user): per_user[k] = beta * d_k**alpha, so each
    user's received power is exactly beta and the per-user powers sum to
    the total.
    """
    amplification = np.asarray(p.distances, dtype=np.float64) ** p.pathloss_exponent
    beta = p.total_power / float(amplification.sum())
    return beta, [beta * a for a in amplification.tolist()]


def zf_beamformers(h: np.ndarray) -> np.ndarray:
    """Unit-norm zero-forcing beamformers for one channel draw.

    ``h`` is (num_users, num_antennas); returns W of shape
    (num_antennas, num_users) whose kth column nulls every other user:
    h_j @ w_k == 0 for j != k.
    """
    h = np.asarray(h, dtype=np.complex128)
    hh = h.conj().T
    w = hh @ np.linalg.inv(h @ hh)
    return w / np.linalg.norm(w, axis=0, keepdims=True)


def _draw_channels(rng: np.random.Generator, n: int, k: int, nt: int) -> np.ndarray:
    z = rng.standard_normal((n, k, nt, 2))
    return (z[..., 0] + 1j * z[..., 1]) * np.sqrt(0.5)


def zf_equivalent_gains(p: ChannelParams) -> np.ndarray:
    """Per-draw, per-user squared equivalent channel magnitudes |h_k @ w_k|^2.

    Shape (mc_samples, num_users). Numerically singular draws (a
    probability-zero event for continuous fading) are redrawn in place; a
    draw that stays singular after bounded retries raises SingularDrawError.
    """
    rng = np.random.default_rng(p.rng_seed)
    out = np.empty((p.mc_samples, p.num_users))
    done = 0
    while done < p.mc_samples:
        m = min(_CHUNK_DRAWS, p.mc_samples - done)
        h = _draw_channels(rng, m, p.num_users, p.num_antennas)
        gains = kernels.zf_gains(h)
        rounds = 0
        while True:
            bad = np.flatnonzero(~np.all(np.isfinite(gains), axis=1))
            if bad.size == 0:
                break
            if rounds >= _MAX_REDRAW_ROUNDS:
                raise SingularDrawError(
                    f"{bad.size} channel draws stayed singular after "
                    f"{_MAX_REDRAW_ROUNDS} redraw rounds"
                )
            redrawn = _draw_channels(rng, bad.size, p.num_users, p.num_antennas)
            gains[bad] = kernels.zf_gains(redrawn)
            rounds += 1
        out[done : done + m] = gains
        done += m
    return out


def rate_from_gains(
    gains: np.ndarray, beta: float, noise_power: float, bandwidth: float
) -> float:
    """Mean Shannon rate over a gain sample: mean(B * log2(1 + beta*g/sigma^2))."""
    g = np.asarray(gains, dtype=np.float64)
    return float(np.mean(bandwidth * np.log2(1.0 + beta * g / noise_power)))


def ensemble_average_rate(p: ChannelParams) -> float:
    """Monte-Carlo per-user transmission rate.

    Received power is equalized across users by the power allocation, so a
    single average over all draws and users estimates every user's rate at
    once. Deterministic given rng_seed.
    """
    beta, _ = power_allocation(p)
    return rate_from_gains(zf_equivalent_gains(p), beta, p.noise_power, p.bandwidth)


def equivalent_rate(c_com: float, video: VideoParams) -> float:
    """Transmission rate expressed in pre-compression bits: c_com * compression_ratio."""
    if c_com < 0.0:
        raise ValueError("c_com must be >= 0")
    return c_com * video.compression_ratio
