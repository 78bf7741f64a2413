"""Exception types shared across the package.

Each class maps onto one CLI exit-code class (see ``scaffoldlab.cli``).
"""


class ScaffoldLabError(Exception):
    exit_code = 3


class ConfigError(ScaffoldLabError, ValueError):
    """Invalid input: bad config file, unparsable series, wrong lengths."""

    exit_code = 1

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class SeriesParseError(ConfigError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class PrecisionExhausted(ScaffoldLabError, ArithmeticError):
    """A valuation or leading term was needed but lies beyond the known precision."""

    exit_code = 2


class ContractViolation(ScaffoldLabError, AssertionError):
    """An identity that must hold for the construction failed."""

    exit_code = 3
