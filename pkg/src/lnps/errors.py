class LnpsError(Exception):
    """Base class for errors raised by this package."""


class ParseError(LnpsError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(LnpsError, ValueError):
    pass


class UsageError(LnpsError, ValueError):
    pass


class InfeasibleError(LnpsError):
    pass


class BudgetError(LnpsError):
    pass
