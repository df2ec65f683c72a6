"""Exception types shared across the package."""


class SnowgtError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class FrameLoadError(SnowgtError, OSError):
    """A frame file could not be read or decoded."""

    code = "frame-load"


class InsufficientFramesError(SnowgtError):
    """Fewer than two usable frames were supplied."""

    code = "insufficient-frames"


class BoundsError(SnowgtError, IndexError):
    """Index or channel outside the valid range."""

    code = "bounds"


class DimensionMismatchError(BoundsError):
    """Arrays or frames disagree in shape."""

    code = "dimension-mismatch"


class ParameterError(SnowgtError, ValueError):
    """An argument is outside its documented domain."""

    code = "parameter"


class NumericFailureError(SnowgtError):
    """A numeric routine did not converge.

    Carries the slice coordinates so video-level callers can report where
    the decomposition broke down.
    """

    code = "numeric-failure"

    def __init__(self, message, mode=None, index=None, channel=None):
        super().__init__(message)
        self.mode = mode
        self.index = index
        self.channel = channel


class ConflictError(SnowgtError):
    """An id or state transition collides with existing state."""

    code = "conflict"


class NotFoundError(SnowgtError):
    """A referenced video, candidate, or file does not exist."""

    code = "not-found"
