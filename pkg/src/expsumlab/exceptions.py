"""Exception types shared across the package."""


class ExpsumlabError(Exception):
    """Base class for all package errors."""


class SizeError(ExpsumlabError, ValueError):
    """A limit/table is out of the supported range or too small for the request."""


class DomainError(ExpsumlabError, ValueError):
    """An argument violates a mathematical precondition (coprimality, range...)."""


class BracketError(ExpsumlabError, ValueError):
    """Root finding was asked for a value outside the bracketed range."""


class PreconditionError(ExpsumlabError, ValueError):
    """A structural precondition failed (e.g. non-monotone map on the range)."""


class ConsistencyError(ExpsumlabError, ValueError):
    """Inputs that must agree with each other do not (beyond tolerance)."""
