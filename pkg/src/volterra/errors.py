"""Exception and warning types shared across the package."""


class VolterraError(Exception):
    """Base class for all errors raised by this package."""


class ContractViolation(VolterraError):
    """An argument violates a documented precondition (shape, sign, domain)."""


class GridError(VolterraError):
    """A parameter does not fit the circular grid (memory > length, period
    not dividing the length, delay outside the grid)."""


class DomainError(VolterraError):
    """A closed-form formula has no real solution for the given parameters."""


class ResourceError(VolterraError):
    """A requested computation exceeds the configured memory budget."""


class ConsistencyError(VolterraError):
    """An internal cross-check failed beyond its tolerance."""


class ParseError(VolterraError):
    """Syntax error in an interconnection expression.

    Carries the byte offset of the failure and the set of token kinds that
    would have been accepted there.
    """

    def __init__(self, message, offset, expected=()):
        super().__init__(message)
        self.offset = offset
        self.expected = frozenset(expected)


class ResolutionError(VolterraError):
    """An expression references a name with no bound series."""


class TruncationWarning(UserWarning):
    """Kernel orders above the configured cap were dropped.

    Attributes mirror the warning text so callers can collect structured
    truncation records.
    """

    def __init__(self, operation, dropped_orders, cap):
        self.operation = operation
        self.dropped_orders = tuple(dropped_orders)
        self.cap = cap
        super().__init__(
            f"{operation}: orders {sorted(self.dropped_orders)} exceed cap {cap} and were dropped"
        )
