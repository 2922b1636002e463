"""Shared fixtures and reference helpers for the test suite."""

import pytest

from vrcc import ResourceRates, TimingParams, VideoParams


def make_hd_video(segment_duration=1.0):
    """A 4K panorama profile used across the tests.

    3840x2160 pixels, 12 bits per pixel, 20% viewport ratio, 30 fps,
    compression ratio 2.41.
    """
    return VideoParams(
        pixels_wide=3840,
        pixels_high=2160,
        bits_per_pixel=12,
        fov_ratio=0.2,
        frame_rate=30.0,
        compression_ratio=2.41,
        segment_duration=segment_duration,
    )


def make_timing(t_cc, t_seg=1.0, num_segments=16, first_proactive_index=1):
    return TimingParams(
        t_cc=t_cc,
        t_seg=t_seg,
        num_segments=num_segments,
        first_proactive_index=first_proactive_index,
    )


def naive_grid_argmax(c_com_equiv, c_cpt, t_cc, t_seg, step):
    """Exhaustive double-loop reference for the lattice search.

    Visits every feasible lattice point in ascending (i, j) order, keeps
    strictly improving values, and therefore breaks ties toward the smallest
    computing duration, then the smallest communication duration. Feasibility
    and the objective use the same multiply-and-compare floating-point
    expressions as the production kernels, so agreement is exact. Written to
    be obviously correct rather than fast.
    """
    best_i, best_j, best_v = 0, 0, -1.0
    i = 0
    while i * step <= t_seg and i * step <= t_cc:
        t_cpt = i * step
        a = c_cpt * t_cpt
        j = 0
        while j * step <= t_seg and t_cpt + j * step <= t_cc:
            v = min(c_com_equiv * (j * step), a)
            if v > best_v:
                best_i, best_j, best_v = i, j, v
            j += 1
        i += 1
    return best_i, best_j, best_v


@pytest.fixture
def hd_video():
    return make_hd_video()


@pytest.fixture
def rates_900_400():
    return ResourceRates(c_com_equiv=900e6, c_cpt=400e6)
