"""Exception types raised across the package."""


class IssueControlError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(IssueControlError, ValueError):
    """Invalid arguments or violated preconditions."""


class CapacityError(IssueControlError):
    """An exhaustive search was refused because the instance is too large."""


class RealizationError(IssueControlError):
    """Realized positions do not reproduce the requested margins."""


class InstanceParseError(IssueControlError, ValueError):
    """An instance, source, or result file could not be parsed."""
