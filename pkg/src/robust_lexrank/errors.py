"""Exception types shared across the package.

Each class carries the process exit code the CLI uses for that error
family, so failures are distinguishable from shell scripts.
"""


class RobustLexRankError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ParseError(RobustLexRankError, ValueError):
    """Malformed input data (bad line, duplicate id, empty corpus)."""

    exit_code = 4


class ParameterError(RobustLexRankError, ValueError):
    """Argument outside its documented domain (threshold, budgets, sizes)."""

    exit_code = 5


class ModelError(RobustLexRankError, ValueError):
    """Ill-formed linear program (dimension mismatch, bad relation, non-finite rhs)."""

    exit_code = 5


class SetDefinitionError(RobustLexRankError, ValueError):
    """Uncertainty-set budgets that admit no feasible perturbation."""

    exit_code = 5


class DegenerateBudgetError(RobustLexRankError, ValueError):
    """Total budget of zero where the scaled decomposition norm is undefined."""

    exit_code = 5


class ConstructionError(RobustLexRankError, ValueError):
    """Matrix that cannot be normalized (zero row) or violates stochasticity."""

    exit_code = 5


class ConvergenceError(RobustLexRankError, RuntimeError):
    """Iteration budget exhausted; carries the last residual seen."""

    exit_code = 6

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NormalizationError(RobustLexRankError, ValueError):
    """Rank vector with no positive entry cannot be max-normalized."""

    exit_code = 6


class NumericError(RobustLexRankError, RuntimeError):
    """Numerical identity or tolerance check failed; carries the gap."""

    exit_code = 6

    def __init__(self, message, gap=None):
        super().__init__(message)
        self.gap = gap


class SolverError(RobustLexRankError, RuntimeError):
    """Linear program ended in an unexpected status."""

    exit_code = 7


class SetupError(RobustLexRankError, RuntimeError):
    """Required packaged fixture is missing or unreadable."""

    exit_code = 8
