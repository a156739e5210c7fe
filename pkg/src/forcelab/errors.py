"""Exception and warning types shared across the package."""


class ForcelabError(Exception):
    """Base class for all errors raised by forcelab."""


class CyclicSetError(ForcelabError):
    """A nested-set description refers back into itself."""


class BoundExceeded(ForcelabError):
    """A requested construction exceeds the configured desk-scale bound."""


class UnknownConditionError(ForcelabError):
    """A condition identifier does not belong to the relevant carrier."""


class OrderError(ForcelabError):
    """A relation fails the preorder (or partial order) axioms."""


class SeparativityError(ForcelabError):
    """An operation requires a separative order and the input is not one."""


class HeightOverflowError(ForcelabError):
    """An ordinal-valued construction ran over the truncated height.

    The untruncated construction relies on unboundedness of the ordinals;
    at desk scale this boundary is surfaced instead of silently capped.
    """


class SlotsExhaustedError(ForcelabError):
    """No free slot is left in a truncated domain."""


class IndexExhaustedError(ForcelabError):
    """No fresh index below the configured bound is available."""


class PoolError(ForcelabError):
    """A name pool violates its closure or membership contract."""


class ScheduleError(ForcelabError):
    """A dense-set provider broke its extender contract."""


class DslError(ForcelabError):
    """Scenario text failed to parse or validate."""

    def __init__(self, message, line=None, col=None):
        if line is not None:
            message = f"{line}:{col if col is not None else '?'}: {message}"
        super().__init__(message)
        self.line = line
        self.col = col


class DeskWarning(UserWarning):
    """Non-fatal deviation from the idealized (untruncated) behaviour."""
