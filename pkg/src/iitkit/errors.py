"""Exception types shared across the package."""


class IITKitError(Exception):
    """Base class for package errors."""


class ConfigurationError(IITKitError, ValueError):
    """A sampler or experiment configuration is invalid."""


class CapacityError(IITKitError, ValueError):
    """The state space is too large for exact enumeration."""


class DegenerateDistributionError(IITKitError, ValueError):
    """All categorical weights are zero."""


class DegenerateStreamError(IITKitError, ValueError):
    """All importance weights in a sample stream are zero."""


class RankDeficiencyError(IITKitError, ValueError):
    """A design submatrix is rank deficient; no pseudo-inverse is applied."""


class ContractViolationError(IITKitError, ValueError):
    """A caller-supplied object violates a documented precondition."""
