"""Exception types shared across the library."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class BoundedSetError(DomainError):
    """The exponent set is bounded and has no limit directions at infinity."""


class UnreachableDirectionError(DomainError):
    """A requested target direction is not a limit direction of the set."""


class PreconditionError(ValueError):
    """A documented precondition of an operation does not hold."""


class TiedExtremePointError(PreconditionError):
    """Two exponents share the maximal projection in the given direction."""


class ResourceLimitError(RuntimeError):
    """An enumeration or solve exceeded its configured resource cap."""
