"""Errors raised by the GLM engine."""


class GLMError(ValueError):
    """Base class for GLM engine errors."""


class UnknownLinkError(GLMError):
    """Link name not one of logit, probit, identity, log, cloglog."""


class RankDeficientError(GLMError):
    """Design matrix lacks full column rank."""


class BoundaryError(GLMError):
    """Step halving could not keep fitted probabilities inside (eps, 1 - eps)."""


class SpecMismatchError(GLMError):
    """Coefficient vector does not match the model specification."""


class NotApplicableError(GLMError):
    """Null-preservation check preconditions do not hold."""
