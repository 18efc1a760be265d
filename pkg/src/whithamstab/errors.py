"""Exception hierarchy shared by all modules.

Each class carries a short ``code`` used by the command line to build a
single-line, machine-parsable error prefix.
"""


class WhithamStabError(Exception):
    code = "error"


class DomainError(WhithamStabError, ValueError):
    """Input outside the domain where a quantity is defined."""

    code = "domain"


class ResonanceError(WhithamStabError, ValueError):
    """Harmonic resonance, e.g. alpha(kappa) == alpha(n*kappa)."""

    code = "resonance"


class BracketError(WhithamStabError, ValueError):
    """Root bracket without a sign change."""

    code = "bracket"


class ConvergenceError(WhithamStabError, RuntimeError):
    """Iterative solver failed to converge.

    ``residual`` holds the last residual norm reached.
    """

    code = "convergence"

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


class DimensionError(WhithamStabError, ValueError):
    """Truncation size too small for the requested computation."""

    code = "dimension"


class NumericalError(WhithamStabError, RuntimeError):
    """Failure inside a numerical kernel (e.g. eigensolver)."""

    code = "numerical"
