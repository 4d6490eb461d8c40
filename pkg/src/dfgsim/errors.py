"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so keep the split between
configuration problems and numerical failures.
"""


class DfgError(Exception):
    """Base class for all package errors."""


class ConfigError(DfgError):
    """Invalid or inconsistent run configuration."""


class ConvergenceError(DfgError):
    """A numerical procedure failed to converge or found no solution."""


class SupportTruncationError(ConvergenceError):
    """A frequency grid does not enclose the kernel support."""


class TailMassError(ConvergenceError):
    """A truncated probability law clips more mass than tolerated."""


class BoundarySolutionError(ConvergenceError):
    """A scalar fit terminated on a search bound instead of an interior minimum."""
