"""Numerical failure modes.  Input errors are :class:`dampwave.expr.ExprSyntaxError`,
:class:`dampwave.expr.DomainError` and plain ``ValueError``."""


class NumericalFailure(RuntimeError):
    """Base class for failures of a numerical procedure on valid input."""


class StepSizeUnderflow(NumericalFailure):
    pass


class NoConvergence(NumericalFailure):
    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class DerivativeBreakdown(NumericalFailure):
    pass


class ContourTooClose(NumericalFailure):
    pass


class CompletenessFailure(NumericalFailure):
    def __init__(self, message, box=None, deficit=None):
        super().__init__(message)
        self.box = box
        self.deficit = deficit


class InsufficientSpectrum(NumericalFailure):
    pass


class IllConditioned(NumericalFailure):
    pass


class EigensolverFailure(NumericalFailure):
    pass
