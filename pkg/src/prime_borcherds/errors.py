"""Exception types shared by every module."""


class BorcherdsError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(BorcherdsError, ValueError):
    """A mathematical precondition failed (bad character value, wrong sign, ...).

    The CLI maps this to exit code 2.
    """


class TruncationError(BorcherdsError):
    """A coefficient at or above the trusted truncation order was requested,
    or an input series is not known to enough precision."""


class ObstructionError(PreconditionError):
    """The requested principal part is obstructed, or the obstruction space
    is nonzero and no cusp-form basis was supplied."""
