"""Exception types shared across the package.

Two failure classes matter to callers: arguments outside a function's
documented domain (``DomainError`` and subclasses), and configurations a
routine cannot serve at all (``UnsupportedConfigurationError``).  The CLI
maps configuration problems to exit code 2 and numeric-range problems to
exit code 3.
"""


class DomainError(ValueError):
    """Argument outside the documented domain of an operation."""


class NumericRangeError(DomainError):
    """Input admissible in principle but outside the range representable
    or evaluable in double precision (overflow, order/argument caps)."""


class SingularityError(DomainError):
    """Evaluation requested exactly at a point where the quantity blows up."""


class UnsupportedConfigurationError(ValueError):
    """Operation requires configuration data that is absent
    (e.g. a rational tangent slope that was never declared)."""
