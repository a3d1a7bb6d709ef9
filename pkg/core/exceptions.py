"""
Exceptions shared by every app of the toolkit.
"""


class UniversalityError(Exception):
    """Base class for all toolkit errors."""


class InvalidArgument(UniversalityError, ValueError):
    """An argument violates an operation's precondition."""


class HypothesisError(InvalidArgument):
    """A theorem hypothesis does not hold for the supplied parameters."""

    def __init__(self, inequality, message=''):
        self.inequality = inequality
        super().__init__(message or f'hypothesis violated: {inequality}')


class CapacityError(UniversalityError):
    """A dense, enumeration or branch-count limit would be exceeded."""

    def __init__(self, what, requested, limit):
        self.what = what
        self.requested = requested
        self.limit = limit
        super().__init__(f'{what}: {requested} exceeds the configured limit of {limit}')
