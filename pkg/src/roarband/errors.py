"""Exception types shared across the package."""


class RoarbandError(Exception):
    """Base class for all errors raised by this package."""


class DataError(RoarbandError):
    """Malformed input data: bad CSV cells, invalid labels, shape problems."""


class ModelError(RoarbandError):
    """Model fitting or scoring could not proceed."""


class ZeroAttributionError(RoarbandError):
    """Every attribution score is zero: the explainer found no informative feature."""


class CampaignError(RoarbandError):
    """A campaign report is invalid or too short for the requested statistic."""


class UsageError(RoarbandError):
    """Bad command-line invocation (unknown flag, conflicting sources, bad value)."""
