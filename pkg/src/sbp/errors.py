"""Exception hierarchy shared by every module."""


class SbpError(Exception):
    """Base class for all errors raised by the package."""


class StructuralError(SbpError):
    """Malformed input: shapes, domains, codomains or element names do not fit.

    Distinct from a law failing on well-formed data, which is reported in a
    :class:`~sbp.report.LawReport` instead of raised.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ContractError(SbpError):
    """An operation was called on data that does not meet its precondition."""


class SizeLimitError(StructuralError):
    """A monoid exceeds the configured maximum size."""


class BudgetExceeded(SbpError):
    """An enumeration ran past its candidate budget."""
