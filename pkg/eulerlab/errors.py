"""
Exception hierarchy for eulerlab.
"""

from typing import List, Optional


class EulerLabError(Exception):
    """Base class for all eulerlab errors"""


class InvalidGrid(EulerLabError, ValueError):
    """Unsupported dimension or odd / too small mode count"""


class ShapeMismatch(EulerLabError, ValueError):
    """Sample array does not have N^dim entries"""


class GridMismatch(EulerLabError, ValueError):
    """Operands live on different grids"""


class ZeroMode(EulerLabError, ValueError):
    """Operation undefined at xi = 0"""


class NegativeTime(EulerLabError, ValueError):
    """Propagator requested for t < 0"""


class NonPhysicalDensity(EulerLabError):
    """rho <= 0 or 1 + theta*sigma <= 0 somewhere on the grid"""


class BlowUp(EulerLabError):
    """Norm exceeded the configured ceiling (data outside the small-data regime)"""


class TimeOutOfRange(EulerLabError, ValueError):
    """Requested time is not covered by a trajectory"""


class FrameSolveError(EulerLabError):
    """Frame matrix is numerically singular"""


class NonPositiveSeries(EulerLabError, ValueError):
    """Decay fit requested on a series with non-positive values"""


class InsufficientSamples(EulerLabError, ValueError):
    """Too few samples for a fit or a finite-difference residual"""


class ZeroGradient(EulerLabError, ValueError):
    """Poincare ratio requested for a constant field"""


class DegenerateDenominator(EulerLabError):
    """Slaving ratio undefined because the decomposed part vanishes"""


class ConfigError(EulerLabError, ValueError):
    """Invalid experiment configuration"""

    def __init__(self, message: str, errors: Optional[List[str]] = None):
        self.errors = errors or []
        if self.errors:
            message = f"{message}: " + "; ".join(self.errors)
        super().__init__(message)
