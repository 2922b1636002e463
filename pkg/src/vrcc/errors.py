"""Exception hierarchy shared by all vrcc modules."""

from __future__ import annotations


class VrccError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(VrccError):
    """A scenario or parameter set is inconsistent or incomplete."""


class DegenerateRatesError(VrccError):
    """Both the transmission and computing rates are zero."""


class InvalidTimingError(VrccError):
    """A time budget or segment duration is not strictly positive."""


class InvalidStepError(VrccError):
    """The requested grid step leaves no usable lattice."""


class InvalidSweepError(VrccError):
    """A sweep axis specification is unusable."""


class SingularDrawError(VrccError):
    """A channel draw stayed numerically singular after bounded redraws."""


class ZFInfeasibleError(VrccError):
    """Zero-forcing requires at least as many antennas as users."""
