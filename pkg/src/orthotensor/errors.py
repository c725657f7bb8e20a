"""Exception types shared across the package.

The CLI maps these onto exit codes: DomainError -> 2, ConvergenceError -> 3.
"""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ExistenceError(DomainError):
    """A coefficient does not exist for the given moments (radicand <= 0)."""


class ConvergenceError(RuntimeError):
    """Numerical integration failed to reach the requested tolerance."""

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved relative error {achieved:.3e})")
        self.achieved = achieved


class ConsistencyError(RuntimeError):
    """Two routes that must agree (closed form vs primitive equations,
    closed-form contraction vs brute force) disagreed beyond tolerance."""
