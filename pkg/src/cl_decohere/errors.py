"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the admissible domain of an operation."""


class ScenarioError(ValueError):
    """A scenario description is inconsistent or incomplete."""


class ConvergenceError(RuntimeError):
    """A numerical routine exhausted its budget before reaching tolerance.

    The best available partial result is attached so callers can decide
    whether to flag it or discard it.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class TrajectoryTerminated(RuntimeError):
    """A Bohmian trajectory entered a region of vanishing density.

    ``time`` records when the integration had to stop.
    """

    def __init__(self, message, time):
        super().__init__(message)
        self.time = time


class ConsistencyError(RuntimeError):
    """An internal invariant that should hold for valid inputs was violated."""
