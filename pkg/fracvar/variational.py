# -*- coding: utf-8 -*-
r"""
Functionals and necessary conditions
====================================

A problem is a cost functional

.. math::

    \mathcal{J}(y) = \int_A^B L(x, y, {}_a\mathcal{D}_x^\alpha y,
                                {}_x\mathcal{D}_b^\beta y)\,dx

with optional integral constraint :math:`\mathcal{I}(y) = \int_A^B g\,dx = l`
and boundary values :math:`y(a) = y_a`, :math:`y(b) = y_b`. The fractional
derivatives are always taken over the whole of :math:`[a, b]`; only the
integration may be restricted to :math:`[A, B]`.

This module evaluates both functionals on sampled functions and returns the
residual fields of the Euler-Lagrange type equations

.. math::

    \partial_y K + {}_x\mathcal{D}_b^\alpha \partial_u K
        + {}_a\mathcal{D}_x^\beta \partial_v K = 0,
    \qquad K = \lambda_0 L - \lambda g,

together with the extra tail equations that appear when :math:`[A, B]` is a
proper subinterval. Sup norms skip two nodes next to every interval end,
where the discrete operators only carry a copied value.

The exact gradient and Hessian of the discretized functionals, used by
:mod:`fracvar.solver`, live here too.
"""
# License: 3-clause BSD

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from sphinx.util.logging import getLogger

from .errors import (DomainError, GridAlignmentError, GridMismatchError,
                     IntervalError, ProblemError)
from .fracops import (Grid, SampledFunction, gl_left_values, gl_matrix,
                      gl_right_values, integrate, sample, trapezoid_weights)
from .lagrangian import (Constant, Environment, Expression, diff, evaluate,
                         free_variables, mul, sub)
from .specfun import check_order

logger = getLogger('fracvar')

INTERIOR_SKIP = 2


@dataclass(frozen=True)
class IsoProblem:
    """Fractional variational problem, optionally isoperimetric.

    Parameters
    ----------
    L : Expression
        Lagrangian in ``x, y, u, v`` (and ``alpha``).
    g : Expression or None
        Constraint integrand; requires ``level``.
    level : float or None
        Constraint value :math:`l`.
    alpha, beta : float or None
        Orders of the left (``u``) and right (``v``) derivatives.
    a, b : float
        Interval the derivatives are taken over.
    A, B : float or None
        Integration interval, defaults to ``[a, b]``.
    y_a, y_b : float
        Boundary values.
    """

    L: Expression
    g: Expression = None
    level: float = None
    alpha: float = None
    beta: float = None
    a: float = 0.
    b: float = 1.
    A: float = None
    B: float = None
    y_a: float = 0.
    y_b: float = 0.

    def __post_init__(self):
        if not isinstance(self.L, Expression):
            raise ProblemError('the Lagrangian must be a parsed expression')
        if (self.g is None) != (self.level is None):
            raise ProblemError('a constraint needs both an integrand and a '
                               'level')
        if self.g is not None and not isinstance(self.g, Expression):
            raise ProblemError('the constraint must be a parsed expression')
        for name in ('alpha', 'beta'):
            if getattr(self, name) is not None:
                object.__setattr__(self, name,
                                   check_order(getattr(self, name), name))
        used = self.variables
        if ('u' in used or 'alpha' in used) and self.alpha is None:
            raise ProblemError('the integrands use u or alpha but no alpha '
                               'was given')
        if 'v' in used and self.beta is None:
            raise ProblemError('the integrands use v but no beta was given')
        a, b = float(self.a), float(self.b)
        A = a if self.A is None else float(self.A)
        B = b if self.B is None else float(self.B)
        for name, value in zip(('a', 'b', 'A', 'B', 'y_a', 'y_b'),
                               (a, b, A, B, self.y_a, self.y_b)):
            object.__setattr__(self, name, float(value))
        if not (a <= A < B <= b):
            raise IntervalError('need a <= A < B <= b, got a=%r, A=%r, B=%r, '
                                'b=%r' % (a, A, B, b))
        if 'u' in used and A == a and self.y_a != 0:
            raise ProblemError('the left derivative is unbounded at a unless '
                               'y(a) = 0, got y_a=%r' % self.y_a)
        if 'v' in used and B == b and self.y_b != 0:
            raise ProblemError('the right derivative is unbounded at b unless '
                               'y(b) = 0, got y_b=%r' % self.y_b)

    @property
    def variables(self):
        """Variables referenced by ``L`` or ``g``."""
        used = free_variables(self.L)
        if self.g is not None:
            used = used | free_variables(self.g)
        return used

    @property
    def has_subinterval(self):
        return self.A != self.a or self.B != self.b

    def grid(self, n):
        return Grid(self.a, self.b, n)

    def with_alpha(self, alpha):
        return replace(self, alpha=alpha)


@dataclass(frozen=True)
class ResidualReport:
    """Residual fields of one necessary condition.

    ``left_tail`` and ``right_tail`` are None when the corresponding
    equation is absent: no ``u`` (resp. ``v``) dependence, or a tail shorter
    than two intervals.
    """

    middle: SampledFunction
    left_tail: SampledFunction = None
    right_tail: SampledFunction = None
    sup_norm_interior: float = 0.

    @property
    def sections(self):
        """``(name, field)`` pairs of the sections present."""
        out = [('left_tail', self.left_tail), ('middle', self.middle),
               ('right_tail', self.right_tail)]
        return [(name, field) for name, field in out if field is not None]


def interior_sup(values, skip=INTERIOR_SKIP):
    """Sup norm without ``skip`` nodes at each end; 0 if nothing is left."""
    values = np.asarray(getattr(values, 'values', values))
    inner = values[skip:len(values) - skip]
    return float(np.max(np.abs(inner))) if inner.size else 0.


###############################################################################
# Helpers

def _check_grid(p, y):
    grid = y.grid
    if not (np.isclose(grid.a, p.a) and np.isclose(grid.b, p.b)):
        raise GridMismatchError('samples live on [%r, %r] but the problem is '
                                'posed on [%r, %r]'
                                % (grid.a, grid.b, p.a, p.b))
    return grid


def _interval_indices(p, grid):
    try:
        iA, iB = grid.index_of(p.A), grid.index_of(p.B)
    except DomainError:
        raise GridAlignmentError('A=%r and B=%r must be nodes of the grid '
                                 'with n=%d' % (p.A, p.B, grid.n))
    if iB - iA < 2:
        raise GridAlignmentError('[A, B] spans fewer than 2 grid intervals')
    return iA, iB


def environment(p, y):
    """Variable values at the nodes of ``y``, derivatives over ``[a, b]``."""
    grid = _check_grid(p, y)
    used = p.variables
    zeros = np.zeros(len(grid))
    u = (gl_left_values(y.values, p.alpha, grid.h) if 'u' in used
         else zeros)
    v = (gl_right_values(y.values, p.beta, grid.h) if 'v' in used
         else zeros)
    alpha = 0. if p.alpha is None else p.alpha
    return Environment(x=grid.nodes, y=y.values, u=u, v=v, alpha=alpha)


def _field(expr, env):
    value = evaluate(expr, env)
    return np.broadcast_to(np.asarray(value, dtype=float),
                           np.shape(env.x)).copy()


def _partial(expr, var, env):
    if var not in free_variables(expr):
        return np.zeros(np.shape(env.x))
    return _field(diff(expr, var), env)


def augmented_integrand(p, lambda0, lam):
    """The integrand ``lambda0 * L - lam * g`` as an expression."""
    if p.g is None:
        raise ProblemError('the problem has no constraint')
    return sub(mul(Constant(lambda0), p.L), mul(Constant(lam), p.g))


def _residual_report(p, y, K):
    """Fields of ``K``'s conditions on ``[A, B]`` and its tails."""
    env = environment(p, y)
    grid = y.grid
    h, n = grid.h, grid.n
    iA, iB = _interval_indices(p, grid)
    used = free_variables(K)
    middle = _partial(K, 'y', env)[iA:iB + 1]
    left_tail = right_tail = None
    if 'u' in used:
        K_u = _partial(K, 'u', env)
        to_B = gl_right_values(K_u[:iB + 1], p.alpha, h)
        middle = middle + to_B[iA:]
        if iA >= 2:
            to_A = gl_right_values(K_u[:iA + 1], p.alpha, h)
            left_tail = SampledFunction(grid.subgrid(0, iA),
                                        to_B[:iA + 1] - to_A)
    if 'v' in used:
        K_v = _partial(K, 'v', env)
        from_A = gl_left_values(K_v[iA:], p.beta, h)
        middle = middle + from_A[:iB - iA + 1]
        if n - iB >= 2:
            from_B = gl_left_values(K_v[iB:], p.beta, h)
            right_tail = SampledFunction(grid.subgrid(iB, n),
                                         from_A[iB - iA:] - from_B)
    middle = SampledFunction(grid.subgrid(iA, iB), middle)
    norm = max([interior_sup(field) for field in
                (left_tail, middle, right_tail) if field is not None])
    return ResidualReport(middle, left_tail, right_tail, norm)


def _require_full_interval(p):
    if p.has_subinterval:
        raise IntervalError('the problem integrates over [%r, %r] inside '
                            '[%r, %r]; use extended_residuals'
                            % (p.A, p.B, p.a, p.b))


def _integrand(p, which):
    if which == 'cost':
        return p.L
    if which == 'constraint':
        if p.g is None:
            raise ProblemError('the problem has no constraint')
        return p.g
    raise ValueError("which must be 'cost' or 'constraint', got %r"
                     % (which,))


###############################################################################
# Operations

def eval_functional(p, which, y):
    """Value of the cost (``which='cost'``) or constraint functional.

    The integrand is evaluated at every node of ``[a, b]`` and integrated
    with the trapezoid rule over ``[A, B]``.

    Parameters
    ----------
    p : IsoProblem
    which : {'cost', 'constraint'}
    y : SampledFunction
        Samples on a grid over ``[a, b]``.

    Returns
    -------
    value : float
    """
    expr = _integrand(p, which)
    env = environment(p, y)
    iA, iB = _interval_indices(p, y.grid)
    values = SampledFunction(y.grid, _field(expr, env))
    return integrate(values.restrict(iA, iB))


def el_residual(p, y):
    """Euler-Lagrange residual field of the cost alone."""
    _require_full_interval(p)
    return _residual_report(p, y, p.L)


def iso_residual(p, y, lambda0, lam):
    """Euler-Lagrange residual field of ``lambda0 * L - lam * g``.

    Parameters
    ----------
    p : IsoProblem
        Needs a constraint and ``[A, B] = [a, b]``.
    y : SampledFunction
    lambda0, lam : float
        Multipliers; ``lambda0 = 0`` is the abnormal case.

    Returns
    -------
    report : ResidualReport
    """
    _require_full_interval(p)
    return _residual_report(p, y, augmented_integrand(p, lambda0, lam))


def extended_residuals(p, y, lambda0=1., lam=0.):
    """Middle and tail residuals for a problem integrated over ``[A, B]``.

    On ``[A, B]`` the right derivative of :math:`\\partial_u K` has upper
    base ``B`` and the left derivative of :math:`\\partial_v K` lower base
    ``A``. The left tail on ``[a, A]`` compares right derivatives with bases
    ``B`` and ``A``; the right tail on ``[B, b]`` compares left derivatives
    with bases ``A`` and ``B``. Without a constraint ``K = lambda0 * L``.

    Raises
    ------
    GridAlignmentError
        If ``A`` or ``B`` is not a node.
    """
    if p.g is None:
        K = mul(Constant(lambda0), p.L)
    else:
        K = augmented_integrand(p, lambda0, lam)
    return _residual_report(p, y, K)


def extremal_check(p, y, tol=None):
    """Whether ``y`` is an extremal of the constraint functional.

    Parameters
    ----------
    p : IsoProblem
    y : SampledFunction
    tol : float, optional
        Defaults to ``1e-3 * (1 + sup |partials of g|)``.

    Returns
    -------
    is_extremal : bool
    norm : float
        Interior sup norm of the extremal field of ``g``.
    """
    if p.g is None:
        raise ProblemError('the problem has no constraint')
    report = _residual_report(p, y, p.g)
    if tol is None:
        env = environment(p, y)
        scale = max(float(np.max(np.abs(_partial(p.g, var, env))))
                    for var in ('y', 'u', 'v'))
        tol = 1e-3 * (1. + scale)
    return report.sup_norm_interior <= tol, report.sup_norm_interior


def ibp_defect(f, g, alpha):
    r"""Defect of fractional integration by parts,
    :math:`\int f\,{}_a\mathcal{D}_x^\alpha g - \int g\,{}_x\mathcal{D}_b^\alpha f`.
    """
    if f.grid != g.grid:
        raise GridMismatchError('f and g are sampled on different grids')
    alpha = check_order(alpha)
    h = f.grid.h
    left = f * gl_left_values(g.values, alpha, h)
    right = g * gl_right_values(f.values, alpha, h)
    return integrate(left) - integrate(right)


def alpha_stationarity(p, y, dalpha=1e-4):
    r"""Quadrature of :math:`\partial_u L \cdot \partial_\alpha
    {}_a\mathcal{D}_x^\alpha y` over ``[A, B]``.

    The order derivative is the central difference with step ``dalpha``.

    Raises
    ------
    DomainError
        If ``alpha - dalpha <= 0`` or ``alpha + dalpha > 1``.
    """
    if 'u' not in free_variables(p.L):
        raise ProblemError('the Lagrangian does not depend on u')
    dalpha = float(dalpha)
    if not dalpha > 0:
        raise DomainError('dalpha must be positive, got %r' % dalpha)
    lo = check_order(p.alpha - dalpha, 'alpha - dalpha')
    hi = check_order(p.alpha + dalpha, 'alpha + dalpha')
    grid = _check_grid(p, y)
    dphi = (gl_left_values(y.values, hi, grid.h) -
            gl_left_values(y.values, lo, grid.h)) / (2. * dalpha)
    L_u = _partial(p.L, 'u', environment(p, y))
    iA, iB = _interval_indices(p, grid)
    return float(trapezoid_weights(grid, iA, iB) @ (L_u * dphi))


###############################################################################
# Discretized functionals

@lru_cache(maxsize=16)
def _operator(grid, alpha, side):
    mat = gl_matrix(grid, alpha, side)
    mat.flags.writeable = False
    return mat


def _combined(p, lambda0, lam, which):
    if which == 'cost':
        return [(1., p.L)]
    if which == 'constraint':
        return [(1., _integrand(p, 'constraint'))]
    if which == 'augmented':
        terms = [(lambda0, p.L)]
        if p.g is not None:
            terms.append((-lam, p.g))
        return terms
    raise ValueError("which must be 'cost', 'constraint' or 'augmented', "
                     "got %r" % (which,))


def discrete_gradient(p, which, y, lambda0=1., lam=0.):
    """Exact gradient of the discretized functional in the node values.

    With trapezoid weights ``c`` on ``[A, B]`` and the operator matrices
    ``U`` (left, order alpha) and ``V`` (right, order beta) the gradient is
    ``c * F_y + U.T @ (c * F_u) + V.T @ (c * F_v)``.

    Parameters
    ----------
    p : IsoProblem
    which : {'cost', 'constraint', 'augmented'}
        ``'augmented'`` differentiates ``lambda0 * J - lam * I``.
    y : SampledFunction
    lambda0, lam : float

    Returns
    -------
    grad : ndarray
        One entry per node, boundary nodes included.
    """
    env = environment(p, y)
    grid = y.grid
    c = trapezoid_weights(grid, *_interval_indices(p, grid))
    partial = {var: np.zeros(len(grid)) for var in ('y', 'u', 'v')}
    for weight, expr in _combined(p, lambda0, lam, which):
        for var in partial:
            if var in free_variables(expr):
                partial[var] += weight * _partial(expr, var, env)
    grad = c * partial['y']
    if 'u' in p.variables:
        grad += _operator(grid, p.alpha, 'left').T @ (c * partial['u'])
    if 'v' in p.variables:
        grad += _operator(grid, p.beta, 'right').T @ (c * partial['v'])
    return grad


def discrete_hessian(p, y, lambda0=1., lam=0., which='augmented'):
    """Exact Hessian of the discretized functional in the node values."""
    env = environment(p, y)
    grid = y.grid
    c = trapezoid_weights(grid, *_interval_indices(p, grid))
    used = p.variables
    ops = {'y': np.eye(len(grid))}
    if 'u' in used:
        ops['u'] = _operator(grid, p.alpha, 'left')
    if 'v' in used:
        ops['v'] = _operator(grid, p.beta, 'right')
    hess = np.zeros((len(grid), len(grid)))
    for weight, expr in _combined(p, lambda0, lam, which):
        names = sorted(ops)
        for i, first in enumerate(names):
            if first not in free_variables(expr):
                continue
            d_first = diff(expr, first)
            for second in names[i:]:
                if second not in free_variables(d_first):
                    continue
                d2 = weight * c * _field(diff(d_first, second), env)
                block = ops[first].T @ (d2[:, np.newaxis] * ops[second])
                hess += block if first == second else block + block.T
    return hess


def classical_limit_distance(y, oracle):
    """Max node distance between ``y`` and an analytic curve.

    ``oracle`` is an x-only expression or a callable of the nodes.
    """
    return float(np.max(np.abs(y.values - sample(oracle, y.grid).values)))
