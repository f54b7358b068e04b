# -*- coding: utf-8 -*-
r"""
Exceptions
==========

Every error raised on purpose by fracvar derives from :class:`FracvarError`,
itself a :class:`sphinx.errors.SphinxError`, so the ``category`` attribute
gives a short human readable kind for command line reports.
"""
# License: 3-clause BSD

from sphinx.errors import SphinxError


class FracvarError(SphinxError):
    category = 'fracvar error'


class DomainError(FracvarError, ValueError):
    """Argument outside the mathematical domain of an operation."""
    category = 'Domain error'


class SpecialFunctionOverflow(FracvarError, OverflowError):
    category = 'Overflow error'


class ExpressionError(FracvarError):
    category = 'Expression error'


class ExpressionSyntaxError(ExpressionError):
    """Malformed integrand source.

    Parameters
    ----------
    message : str
        Description of the problem.
    position : int
        Zero based column in the original source string.
    """
    category = 'Syntax error'

    def __init__(self, message, position=0):
        super().__init__('%s (at position %d)' % (message, position))
        self.position = position


class UnknownIdentifierError(ExpressionSyntaxError):
    category = 'Unknown identifier'

    def __init__(self, name, position=0):
        super().__init__('unknown identifier %r' % (name,), position)
        self.name = name


class EvaluationError(ExpressionError):
    category = 'Evaluation error'


class ProblemError(FracvarError):
    """Inconsistent variational problem data."""
    category = 'Problem error'


class IntervalError(ProblemError):
    category = 'Interval error'


class GridAlignmentError(ProblemError):
    category = 'Grid alignment error'


class GridMismatchError(FracvarError):
    category = 'Grid mismatch'


class NumericalFailure(FracvarError):
    category = 'Numerical failure'


class ConvergenceError(NumericalFailure):
    """Iteration limit reached; ``result`` holds the last iterate."""
    category = 'Convergence error'

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class InfeasibleConstraintError(NumericalFailure):
    category = 'Infeasible constraint'


class NoStationaryPointError(NumericalFailure):
    category = 'No stationary point'
