"""Shared error types. UsageError maps to CLI exit 1, NumericFailure to exit 2."""


class UsageError(ValueError):
    pass


class NumericFailure(RuntimeError):
    def __init__(self, message: str, bracket=None):
        super().__init__(message)
        self.bracket = bracket
