"""Exception hierarchy. Every error carries the pipeline stage that raised it."""

from __future__ import annotations


class AnfloerError(Exception):
    """Base class; ``stage`` names the pipeline step (``validate``, ``solve``, ...)."""

    exit_code = 1

    def __init__(self, message: str, stage: str = "unknown"):
        super().__init__(message)
        self.stage = stage

    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "message": str(self), "stage": self.stage}


class ValidationError(AnfloerError, ValueError):
    """Bad user input: out-of-range r, malformed or degenerate loops."""

    exit_code = 2


class NumericalError(AnfloerError, ArithmeticError):
    """Solver or quadrature did not converge, or a geometric check failed numerically."""

    exit_code = 3
