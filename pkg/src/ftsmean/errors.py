"""Typed errors shared across the package."""


class GridMismatchError(ValueError):
    """Operands live on different grids."""


class InvalidLagError(ValueError):
    """Requested autocovariance lag is out of range for the sample."""


class InsufficientSampleError(ValueError):
    """Sample too small for the requested estimator."""


class NonstationaryKernelError(ValueError):
    """Autoregression kernel has Hilbert-Schmidt norm >= 1."""


class DegenerateSpectrumError(ValueError):
    """No positive eigenvalue available for dimension selection."""


class DegenerateEigenvalueError(ValueError):
    """An eigenvalue at or below the floor appears in a denominator."""


class CurveCsvError(ValueError):
    """Malformed curve CSV input; carries the offending 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
