"""Exception types shared across the package."""


class SphereProjError(Exception):
    """Base class for all errors raised by sphereproj."""


class DimensionMismatchError(SphereProjError, ValueError):
    """Operands live on spheres of different dimension, or sizes disagree."""


class DomainError(SphereProjError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ConfigurationError(SphereProjError, ValueError):
    """An operator was assembled from incompatible ingredients."""


class DegenerateNodeSetError(SphereProjError, ValueError):
    """The node set cannot support a basis of the requested degree."""


class InvariantViolationError(SphereProjError, ValueError):
    """A constructed or loaded object breaks one of its defining invariants."""


class RuleFormatError(SphereProjError, ValueError):
    """A rule or point-set file is malformed; the message names the line."""


class NumericalError(SphereProjError, RuntimeError):
    """An iterative numerical procedure failed to converge."""


class EvaluationError(SphereProjError, RuntimeError):
    """A user-supplied function returned a non-finite value."""
