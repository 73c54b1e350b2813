"""Exception hierarchy shared across the package."""


class DualOrliczError(Exception):
    """Base class for all package errors."""


class ConfigurationError(DualOrliczError):
    """Invalid or unsupported configuration (grid scheme, singular map, CLI input)."""


class InvalidBodyError(DualOrliczError):
    """A body violates the star-body condition (non-positive or non-finite radii)."""


class NumericalDomainError(DualOrliczError):
    """A numeric evaluation left the valid domain.

    Carries ``node_index`` when the failure is tied to a quadrature node.
    """

    def __init__(self, message: str, node_index: int | None = None):
        super().__init__(message)
        self.node_index = node_index


class InvalidCompositionError(DualOrliczError):
    """The inner function of a composition is not invertible on the probe range."""


class UnsupportedRepresentationError(DualOrliczError):
    """The operation requires a body representation that is not available."""


class OptimizationFailureError(DualOrliczError):
    """The search budget was exhausted without a single successful evaluation."""


class ContractError(DualOrliczError):
    """Arguments violate an operation's contract (e.g. sense vs. function class)."""
