"""Exception types shared across the package."""


class SlideStatsError(Exception):
    """Base class for every error raised by slidestats."""


class NonPositiveDistance(SlideStatsError):
    """A distance entry is zero or negative (usually duplicate points upstream)."""


class TooFewPoints(SlideStatsError):
    """Fewer points or distances than the operation requires."""


class DuplicatePoint(SlideStatsError):
    """Two input points coincide exactly; nearest-neighbor distances are undefined."""


class NotNormalized(SlideStatsError):
    """Step density does not integrate to one within tolerance."""


class QuadratureNoConvergence(SlideStatsError):
    """Adaptive quadrature could not reach the requested tolerance."""


class OracleUnstable(SlideStatsError):
    """Successive Richardson extrapolation levels diverge."""


class SlideOverflow(SlideStatsError):
    """Power-family evaluation produced a non-finite intermediate."""


class NumericFailure(SlideStatsError):
    """A numeric invariant was violated (result out of its guaranteed range)."""


class NonNegativeRho2(SlideStatsError):
    """Dimension estimate requested for a non-negative second slide statistic."""


class BadSpec(SlideStatsError):
    """Source specification is inconsistent or incomplete."""


class ParseError(SlideStatsError):
    """Input file could not be parsed.

    Carries the offending 1-based line number when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NonPositivePrice(SlideStatsError):
    """Price column contains a zero or negative value; log returns undefined."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SeriesTooShort(SlideStatsError):
    """Return series is too short for the requested embedding."""
