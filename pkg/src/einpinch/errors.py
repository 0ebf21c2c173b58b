"""Exception types shared across the package."""


class InvalidTensorError(ValueError):
    """Array does not have the algebraic symmetries of a curvature tensor."""


class NotEinsteinError(ValueError):
    """Mixed block B (or the traceless Ricci part) is not negligible."""

    def __init__(self, message, ricci_defect=None, b_norm=None):
        super().__init__(message)
        self.ricci_defect = ricci_defect
        self.b_norm = b_norm


class DomainError(ValueError):
    """Argument outside the domain of an operation."""


class HypothesisError(ValueError):
    """A lemma hypothesis fails for the given data.

    ``constraint`` names the first failed constraint.
    """

    def __init__(self, constraint, message=None):
        super().__init__(message or f"hypothesis violated: {constraint}")
        self.constraint = constraint


class InfeasibleRegionError(ValueError):
    """The constrained search region is empty."""


class BergerSearchError(RuntimeError):
    """No frame passing the residual checks was found; ``best`` holds the candidate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class BlowUpError(ArithmeticError):
    """Integration aborted by the blow-up guard."""

    def __init__(self, message, t_estimate, trajectory=None):
        super().__init__(message)
        self.t_estimate = t_estimate
        self.trajectory = trajectory
