"""Error types raised by the toolkit.

All of them derive from ToolkitError so callers (notably the CLI) can
distinguish domain validation failures from programming errors.
"""


class ToolkitError(Exception):
    """Base class for every error raised by this package."""


class NotHermitianError(ToolkitError):
    pass


class NotSkewHermitianError(ToolkitError):
    pass


class NotProjectorError(ToolkitError):
    pass


class NotUnitaryError(ToolkitError):
    pass


class NotNestedError(ToolkitError):
    pass


class NotPerpendicularError(ToolkitError):
    pass


class NotProjectorGramError(ToolkitError):
    pass


class ZeroBranchError(ToolkitError):
    pass


class RankOutOfRangeError(ToolkitError):
    pass


class DimensionMismatchError(ToolkitError):
    pass


class PreconditionUnmetError(ToolkitError):
    pass


class BadParameterLengthError(ToolkitError):
    pass
