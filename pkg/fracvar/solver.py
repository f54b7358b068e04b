# -*- coding: utf-8 -*-
r"""
Direct solver
=============

Discretize-then-optimize solution of fractional variational problems. The
unknowns are the interior node values; derivatives enter through the dense
Grünwald-Letnikov matrices and the functionals through trapezoid weights,
so the stationary points of the discrete problem satisfy a discrete
counterpart of the Euler-Lagrange equations (see
:func:`fracvar.variational.discrete_gradient`).

Isoperimetric problems are solved by Newton iterations on the KKT system

.. math::

    \nabla J - \lambda \nabla I = 0, \qquad I - l = 0,

falling back to an augmented Lagrangian loop when Newton stalls. When the
discrete constraint gradient vanishes the problem is treated as abnormal:
:math:`\lambda_0 = 0`, :math:`\lambda = 1`.

The order itself can be optimized for a family of problems with
:func:`optimize_alpha`.
"""
# License: 3-clause BSD

from dataclasses import dataclass, replace

import numpy as np
from joblib import Parallel, delayed
from scipy import linalg, optimize
from sphinx.util.logging import getLogger

from .errors import (ConvergenceError, DomainError, InfeasibleConstraintError,
                     NoStationaryPointError, ProblemError)
from .fracops import Grid, SampledFunction, integrate
from .lagrangian import Environment, evaluate, parse
from .specfun import gamma
from .variational import (IsoProblem, alpha_stationarity, discrete_gradient,
                          discrete_hessian, el_residual, eval_functional,
                          extended_residuals)

logger = getLogger('fracvar')

# order increments of the continuation fallback of solve_unconstrained
ORDER_STEP = 0.05
MIN_ORDER_STEP = 1e-3


@dataclass(frozen=True)
class SolverOptions:
    """Discretization and iteration controls.

    Parameters
    ----------
    n : int
        Number of grid intervals, at least 16.
    max_iterations : int
        Newton iterations (and augmented Lagrangian outer iterations).
    kkt_tolerance : float
        Bound on the sup norm of the discrete stationarity residual (scaled
        by ``1 + |lambda|``) and on the constraint gap.
    abnormal_gradient_tolerance : float
        Below this (scaled by ``1 + |l|``) the discrete constraint gradient
        counts as zero.
    initial_guess : None, 'linear' or SampledFunction
        Straight line between the boundary values by default.
    """

    n: int = 1024
    max_iterations: int = 50
    kkt_tolerance: float = 1e-9
    abnormal_gradient_tolerance: float = 1e-8
    initial_guess: object = None

    def __post_init__(self):
        if int(self.n) < 16:
            raise DomainError('n must be at least 16, got %r' % (self.n,))
        if int(self.max_iterations) < 1:
            raise DomainError('max_iterations must be positive')
        for name in ('kkt_tolerance', 'abnormal_gradient_tolerance'):
            if not float(getattr(self, name)) > 0:
                raise DomainError('%s must be positive' % name)
        if not (self.initial_guess is None or
                self.initial_guess == 'linear' or
                isinstance(self.initial_guess, SampledFunction)):
            raise DomainError("initial_guess must be 'linear' or sampled "
                              "values, got %r" % (self.initial_guess,))
        object.__setattr__(self, 'n', int(self.n))
        object.__setattr__(self, 'max_iterations', int(self.max_iterations))


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a solve.

    ``residual_norm`` is the sup norm of the interior discrete stationarity
    residual the iteration drives to zero.
    """

    y: SampledFunction
    lambda0: float
    lam: float
    constraint_gap: float
    residual_norm: float
    iterations: int
    abnormal: bool = False


class _Discretization(object):
    """Interior-node view of a problem on a fixed grid."""

    def __init__(self, problem, opts):
        self.problem = problem
        self.opts = opts
        self.grid = problem.grid(opts.n)

    def initial(self):
        guess = self.opts.initial_guess
        if isinstance(guess, SampledFunction):
            if guess.grid != self.grid:
                raise ProblemError('the initial guess is sampled on %r, '
                                   'expected %r' % (guess.grid, self.grid))
            return np.array(guess.values[1:-1])
        p = self.problem
        return np.linspace(p.y_a, p.y_b, self.grid.n + 1)[1:-1]

    def full(self, z):
        return SampledFunction(self.grid, np.concatenate(
            [[self.problem.y_a], z, [self.problem.y_b]]))

    def gradient(self, y, which, lambda0=1., lam=0.):
        return discrete_gradient(self.problem, which, y, lambda0, lam)[1:-1]

    def hessian(self, y, lambda0=1., lam=0., which='augmented'):
        hess = discrete_hessian(self.problem, y, lambda0, lam, which)
        return hess[1:-1, 1:-1]

    def gap(self, y):
        p = self.problem
        return eval_functional(p, 'constraint', y) - p.level


def _max(vec):
    return float(np.max(np.abs(vec))) if np.size(vec) else 0.


def _linear_solve(mat, rhs):
    try:
        return linalg.solve(mat, rhs)
    except (linalg.LinAlgError, ValueError):
        return linalg.lstsq(mat, rhs)[0]


def _newton_unconstrained(p, opts):
    """Newton's method on the discrete cost gradient from the initial guess."""
    disc = _Discretization(p, opts)
    z = disc.initial()
    tol = opts.kkt_tolerance
    norm = np.inf
    for it in range(opts.max_iterations + 1):
        y = disc.full(z)
        grad = disc.gradient(y, 'cost')
        norm = _max(grad)
        logger.debug('[fracvar] newton %d: gradient %.3e', it, norm)
        if norm <= tol:
            return SolveResult(y, 1., 0., 0., norm, it)
        if it == opts.max_iterations:
            break
        step = _linear_solve(disc.hessian(y, which='cost'), -grad)
        for _ in range(30):
            trial = disc.full(z + step)
            if _max(disc.gradient(trial, 'cost')) < norm:
                break
            step = step / 2.
        else:
            break
        z = z + step
    result = SolveResult(disc.full(z), 1., 0., 0., norm, it)
    raise ConvergenceError('no stationary point reached after %d iterations '
                           '(gradient %.3e > %.3e)' % (it, norm, tol), result)


def _order_continuation(p, opts):
    """Follow the stationary curve from order 1 down to ``p.alpha``.

    The order 1 problem starts from the straight line, every later order
    from the solution of the previous one. A failed step is retried with
    half the increment.
    """
    step = ORDER_STEP
    current = 1.
    result = _newton_unconstrained(p.with_alpha(current), opts)
    total = result.iterations
    while current > p.alpha:
        target = max(p.alpha, current - step)
        try:
            result = _newton_unconstrained(
                p.with_alpha(target), replace(opts, initial_guess=result.y))
        except ConvergenceError:
            step = step / 2.
            if step < MIN_ORDER_STEP:
                raise
            logger.debug('[fracvar] order continuation: step %.3g at '
                         'alpha=%g', step, current)
            continue
        total += result.iterations
        current = target
        step = min(ORDER_STEP, 2. * step)
        logger.debug('[fracvar] order continuation reached alpha=%g', current)
    return replace(result, iterations=total)


def solve_unconstrained(p, opts=None):
    """Stationary point of the discretized cost functional.

    Newton's method on the discrete gradient with a backtracking search on
    its norm. Convex costs give the minimizer; otherwise the stationary
    point closest to the initial guess.

    When Newton stalls from the straight line and the cost depends on
    ``u``, the stationary curve is followed in the order instead: the
    problem at ``alpha = 1`` is solved from the straight line and each
    smaller order from the solution of the previous one, down to
    ``p.alpha``.

    Parameters
    ----------
    p : IsoProblem
        Without constraint.
    opts : SolverOptions

    Returns
    -------
    result : SolveResult
        With ``lambda0 = 1`` and ``lam = 0``.

    Raises
    ------
    ConvergenceError
        After ``max_iterations`` or when no step reduces the gradient.
    """
    if p.g is not None:
        raise ProblemError('the problem has a constraint; use '
                           'solve_isoperimetric')
    opts = SolverOptions() if opts is None else opts
    try:
        result = _newton_unconstrained(p, opts)
    except ConvergenceError as exc:
        if (isinstance(opts.initial_guess, SampledFunction) or
                'u' not in p.variables or p.alpha >= 1.):
            raise
        logger.warning('[fracvar] Newton stalled from the straight line '
                       '(%s); following the solution from order 1', exc)
        result = _order_continuation(p, opts)
    logger.info('[fracvar] unconstrained solve converged in %d iterations '
                '(n=%d)', result.iterations, opts.n)
    return result


def _normal_kkt(disc, z, lam):
    """Newton on the KKT system; returns (z, lam, kkt, gap, iterations, ok)."""
    opts = disc.opts
    tol = opts.kkt_tolerance
    for it in range(opts.max_iterations + 1):
        y = disc.full(z)
        g_cost = disc.gradient(y, 'cost')
        g_con = disc.gradient(y, 'constraint')
        gap = disc.gap(y)
        residual = g_cost - lam * g_con
        kkt = _max(residual)
        merit = np.hypot(np.linalg.norm(residual), gap)
        logger.debug('[fracvar] kkt %d: stationarity %.3e, gap %.3e, '
                     'lambda %.12g', it, kkt, gap, lam)
        if kkt <= tol * (1. + abs(lam)) and abs(gap) <= tol:
            return z, lam, kkt, gap, it, True
        if it == opts.max_iterations:
            break
        hess = disc.hessian(y, 1., lam)
        m = len(z)
        mat = np.zeros((m + 1, m + 1))
        mat[:m, :m] = hess
        mat[:m, m] = -g_con
        mat[m, :m] = g_con
        step = _linear_solve(mat, -np.append(residual, gap))
        scale = 1.
        for _ in range(30):
            trial = disc.full(z + scale * step[:m])
            t_lam = lam + scale * step[m]
            t_res = (disc.gradient(trial, 'cost') -
                     t_lam * disc.gradient(trial, 'constraint'))
            if np.hypot(np.linalg.norm(t_res), disc.gap(trial)) < merit:
                break
            scale /= 2.
        else:
            break
        z = z + scale * step[:m]
        lam = lam + scale * step[m]
    return z, lam, kkt, gap, it, False


def _augmented_lagrangian(disc, z, lam, rho=10.):
    r"""Method of multipliers on :math:`J - \lambda (I - l)
    + \rho/2 (I - l)^2`; returns (z, lam, kkt, gap, iterations, ok)."""
    opts = disc.opts
    tol = opts.kkt_tolerance
    total = 0
    kkt = gap = np.inf
    for outer in range(opts.max_iterations):
        for _ in range(opts.max_iterations):
            y = disc.full(z)
            g_con = disc.gradient(y, 'constraint')
            mu = lam - rho * disc.gap(y)
            residual = disc.gradient(y, 'cost') - mu * g_con
            total += 1
            if _max(residual) <= tol * (1. + abs(mu)):
                break
            hess = disc.hessian(y, 1., mu) + rho * np.outer(g_con, g_con)
            z = z + _linear_solve(hess, -residual)
        y = disc.full(z)
        previous, gap = gap, disc.gap(y)
        lam = lam - rho * gap
        kkt = _max(disc.gradient(y, 'cost') -
                   lam * disc.gradient(y, 'constraint'))
        logger.debug('[fracvar] multipliers %d: gap %.3e, lambda %.12g, '
                     'rho %g', outer, gap, lam, rho)
        if kkt <= tol * (1. + abs(lam)) and abs(gap) <= tol:
            return z, lam, kkt, gap, total, True
        if abs(gap) > 0.25 * abs(previous):
            rho *= 10.
    return z, lam, kkt, gap, total, False


def _solve_abnormal(disc, z):
    """Gauss-Newton on ``(grad I, I - l) = 0``, the abnormal conditions."""
    opts = disc.opts
    tol = opts.kkt_tolerance
    p = disc.problem
    for it in range(opts.max_iterations + 1):
        y = disc.full(z)
        g_con = disc.gradient(y, 'constraint')
        gap = disc.gap(y)
        norm = _max(g_con)
        if norm <= opts.abnormal_gradient_tolerance * (1. + abs(p.level)) \
                and abs(gap) <= tol:
            logger.info('[fracvar] abnormal solution: the constraint '
                        'gradient vanishes, lambda0 = 0')
            return SolveResult(y, 0., 1., gap, norm, it, abnormal=True)
        if it == opts.max_iterations:
            break
        jac = np.vstack([disc.hessian(y, which='constraint'),
                         g_con[np.newaxis]])
        step = linalg.lstsq(jac, -np.append(g_con, gap))[0]
        if not np.any(step):
            break
        z = z + step
    result = SolveResult(disc.full(z), 0., 1., gap, norm, it, abnormal=True)
    if abs(gap) > tol:
        raise InfeasibleConstraintError(
            'the constraint level %r cannot be reached (gap %.3e); the '
            'constraint gradient vanishes' % (p.level, gap))
    raise ConvergenceError('abnormal conditions not met after %d iterations'
                           % it, result)


def solve_isoperimetric(p, opts=None):
    """KKT point of the discretized cost subject to the discretized
    constraint.

    Parameters
    ----------
    p : IsoProblem
        With constraint.
    opts : SolverOptions

    Returns
    -------
    result : SolveResult
        ``lambda0 = 1`` and the multiplier ``lam`` of ``F = L - lam * g`` in
        the normal case; ``lambda0 = 0``, ``lam = 1`` and ``abnormal`` set
        when the constraint gradient vanishes.

    Raises
    ------
    ConvergenceError
        When neither Newton nor the augmented Lagrangian fallback converge.
    InfeasibleConstraintError
        When no iterate reaches the constraint level.
    """
    if p.g is None:
        raise ProblemError('the problem has no constraint; use '
                           'solve_unconstrained')
    opts = SolverOptions() if opts is None else opts
    disc = _Discretization(p, opts)
    z = disc.initial()
    y = disc.full(z)
    g_con = disc.gradient(y, 'constraint')
    threshold = opts.abnormal_gradient_tolerance * (1. + abs(p.level))
    if _max(g_con) <= threshold:
        return _solve_abnormal(disc, z)
    g_cost = disc.gradient(y, 'cost')
    lam = float(g_con @ g_cost / (g_con @ g_con))
    z, lam, kkt, gap, it, ok = _normal_kkt(disc, z, lam)
    if not ok:
        logger.warning('[fracvar] Newton stalled on the KKT system '
                       '(stationarity %.3e, gap %.3e); switching to the '
                       'augmented Lagrangian method', kkt, gap)
        z, lam, kkt, gap, extra, ok = _augmented_lagrangian(disc, z, lam)
        it += extra
    y = disc.full(z)
    if ok and _max(disc.gradient(y, 'constraint')) <= threshold:
        return _solve_abnormal(disc, z)
    result = SolveResult(y, 1., lam, gap, kkt, it)
    if not ok:
        if abs(gap) > opts.kkt_tolerance:
            raise InfeasibleConstraintError(
                'constraint gap %.3e after %d iterations' % (gap, it))
        raise ConvergenceError('KKT stationarity %.3e after %d iterations'
                               % (kkt, it), result)
    logger.info('[fracvar] isoperimetric solve converged in %d iterations '
                '(n=%d, lambda=%.12g)', it, opts.n, lam)
    return result


def solve(p, opts=None):
    """:func:`solve_isoperimetric` or :func:`solve_unconstrained`."""
    if p.g is None:
        return solve_unconstrained(p, opts)
    return solve_isoperimetric(p, opts)


###############################################################################
# Order optimization

def _alpha_derivative(objective, alpha, dalpha):
    hi = min(alpha + dalpha, 1.)
    lo = max(alpha - dalpha, 0.5 * alpha)
    return (objective(hi) - objective(lo)) / (hi - lo)


def optimize_alpha(objective, bracket, dalpha=1e-4, xtol=1e-12, samples=16):
    """Stationary point of ``alpha -> objective(alpha)`` inside ``bracket``.

    The derivative is a central difference with step ``dalpha`` (one sided
    at ``alpha = 1``). It is sampled on ``samples`` equal subintervals of
    the bracket and the root in the first subinterval where it changes sign
    is located with :func:`scipy.optimize.brentq`.

    Parameters
    ----------
    objective : callable
        ``alpha -> float``, for instance :func:`psi_objective` or
        :func:`family_objective`.
    bracket : (float, float)
        ``0 < alpha_lo < alpha_hi <= 1``.
    samples : int
        Number of subintervals scanned for a sign change.

    Returns
    -------
    alpha_star : float
    value : float
        ``objective(alpha_star)``.

    Raises
    ------
    NoStationaryPointError
        If the derivative keeps its sign on all samples.
    """
    lo, hi = (float(b) for b in bracket)
    if not 0. < lo < hi <= 1.:
        raise DomainError('bracket must satisfy 0 < lo < hi <= 1, got '
                          '(%r, %r)' % (lo, hi))
    if int(samples) < 1:
        raise DomainError('samples must be positive, got %r' % (samples,))

    def derivative(alpha):
        return _alpha_derivative(objective, alpha, dalpha)

    alphas = np.linspace(lo, hi, int(samples) + 1)
    values = np.array([derivative(alpha) for alpha in alphas])
    logger.debug('[fracvar] order derivative on (%g, %g): %s', lo, hi,
                 values)
    zeros = np.flatnonzero(values == 0.)
    changes = np.flatnonzero(values[:-1] * values[1:] < 0.)
    if zeros.size and (not changes.size or zeros[0] <= changes[0]):
        alpha_star = float(alphas[zeros[0]])
    elif changes.size:
        i = changes[0]
        alpha_star = optimize.brentq(derivative, alphas[i], alphas[i + 1],
                                     xtol=xtol)
    else:
        raise NoStationaryPointError(
            'no stationary point in (%r, %r): the derivative is %.3e and '
            '%.3e at the ends and keeps its sign on %d samples'
            % (lo, hi, values[0], values[-1], len(values)))
    value = objective(alpha_star)
    logger.info('[fracvar] stationary order %.6f in (%g, %g), objective '
                '%.12g', alpha_star, lo, hi, value)
    return alpha_star, value


def psi_objective(n=4096):
    r"""The built-in order objective :math:`\alpha \mapsto \Psi(\bar y)`.

    ``ybar = x^alpha`` and its left derivative ``gamma(alpha + 1)`` are
    exact; only the integral is a trapezoid sum on ``n`` intervals.
    """
    from .problems import PSI_LAGRANGIAN
    expr = parse(PSI_LAGRANGIAN)
    grid = Grid(0., 1., n)
    x = grid.nodes

    def objective(alpha):
        env = Environment(x=x, y=x ** alpha,
                          u=np.full(x.shape, gamma(alpha + 1.)), alpha=alpha)
        values = np.broadcast_to(evaluate(expr, env), x.shape)
        return integrate(SampledFunction(grid, values))

    return objective


def family_objective(family, opts=None):
    """``alpha -> J(y(alpha))`` with ``y(alpha)`` from
    :func:`solve_unconstrained`.

    ``family`` is an :class:`IsoProblem` whose order is replaced, or a
    callable returning the problem for an order.
    """
    def objective(alpha):
        p = _problem_at(family, alpha)
        return eval_functional(p, 'cost', solve_unconstrained(p, opts).y)

    return objective


def _problem_at(family, alpha):
    if isinstance(family, IsoProblem):
        return family.with_alpha(alpha)
    return family(alpha)


def _solve_at(family, alpha, opts):
    return solve(_problem_at(family, alpha), opts)


def alpha_sweep(family, alphas, opts=None, n_jobs=1):
    """Independent solves for several orders.

    Parameters
    ----------
    family : IsoProblem or callable
        Problem template, or ``alpha -> IsoProblem`` when the boundary data
        depend on the order.
    alphas : sequence of float
    opts : SolverOptions
    n_jobs : int
        Passed to :class:`joblib.Parallel`.

    Returns
    -------
    results : list of SolveResult
        In the order of ``alphas``.
    """
    alphas = [float(alpha) for alpha in alphas]
    if n_jobs == 1:
        return [_solve_at(family, alpha, opts) for alpha in alphas]
    return Parallel(n_jobs=n_jobs)(
        delayed(_solve_at)(family, alpha, opts) for alpha in alphas)


def stationarity_system_check(p, y, alpha=None, dalpha=1e-4):
    """Both equations of the order-dependent stationarity system.

    Returns
    -------
    el_norm : float
        Interior sup norm of the Euler-Lagrange residual of the cost.
    alpha_residual : float
        :func:`fracvar.variational.alpha_stationarity`.
    """
    if alpha is not None:
        p = p.with_alpha(alpha)
    if p.has_subinterval:
        report = extended_residuals(p, y)
    else:
        report = el_residual(p, y)
    if 'u' not in p.variables:
        return report.sup_norm_interior, 0.
    return report.sup_norm_interior, alpha_stationarity(p, y, dalpha)
