"""Error types raised by the library.

All subclass ValueError so callers that only care about "bad input" can catch
one base type.
"""


class SizeError(ValueError):
    """A register, matrix, or search space exceeds a configured limit."""


class ShapeError(ValueError):
    """Operand dimensions do not match."""


class ConfigError(ValueError):
    """A scenario or experiment configuration is invalid."""
