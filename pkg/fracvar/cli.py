# -*- coding: utf-8 -*-
r"""
Command line interface
======================

``fracvar deriv``
    Left or right derivative of an expression in ``x``, as a CSV table.
``fracvar solve``
    Solve a problem file (or ``builtin:eq_ex``, ``builtin:psi``); several
    orders give a sweep.
``fracvar check``
    Residual diagnostics of a solution table against a problem.
``fracvar alpha-opt``
    Stationary order of a problem family.

Exit status is 0 on success, 1 for usage, parse and data errors and 2 for
numerical failures. Errors are reported on standard error as
``fracvar: <category>: <message>``.
"""
# License: 3-clause BSD

import argparse
from functools import partial
import logging
import os
import sys

import numpy as np
import pandas as pd
from sphinx.errors import ConfigError
from sphinx.util.logging import getLogger

from . import __version__
from .errors import (DomainError, ExpressionError, FracvarError,
                     GridMismatchError, ProblemError)
from .fracops import Grid, SampledFunction, left_rl, right_rl, sample
from .lagrangian import free_variables, parse
from .problems import (BUILTIN_PREFIX, EQ_EX_CONSTRAINT, EQ_EX_LAGRANGIAN,
                       build_options, build_problem, builtin_conf,
                       read_problem_file, resolve)
from .solver import (alpha_sweep, family_objective, optimize_alpha,
                     psi_objective, solve, stationarity_system_check)
from .utils import check_nodes, read_table, table_to_csv
from .variational import (discrete_gradient, el_residual, extended_residuals,
                          extremal_check, interior_sup, iso_residual)

logger = getLogger('fracvar')

USAGE_ERRORS = (ConfigError, ExpressionError, ProblemError, DomainError,
                GridMismatchError, OSError)

_handler = None


def _setup_logging(verbosity):
    """Route the package log to the current ``sys.stderr``.

    The handler of a previous call is dropped, not flushed: its stream may
    be closed by now.
    """
    global _handler
    base = logging.getLogger('sphinx.fracvar')
    if _handler is not None:
        base.removeHandler(_handler)
        _handler = None
    if verbosity:
        _handler = logging.StreamHandler(sys.stderr)
        _handler.setFormatter(logging.Formatter('%(levelname)s: %(message)s'))
        base.addHandler(_handler)
        base.setLevel(logging.INFO if verbosity == 1 else logging.DEBUG)
    else:
        base.setLevel(logging.WARNING)


def _load(problem, alpha=None, n=None):
    """Completed config of a problem file or built-in name."""
    if problem.startswith(BUILTIN_PREFIX):
        conf = builtin_conf(problem, alpha[0] if alpha else 0.5)
    else:
        if not os.path.isfile(problem):
            raise OSError('problem file %r not found' % (problem,))
        conf = read_problem_file(problem)
    if alpha:
        conf['alpha'] = [float(a) for a in alpha]
    if n is not None:
        conf['n'] = n
    return conf


def _is_eq_ex(conf):
    return (conf['lagrangian'] == parse(EQ_EX_LAGRANGIAN) and
            conf['constraint'] == parse(EQ_EX_CONSTRAINT))


def _bool(flag):
    return str(bool(flag)).lower()


###############################################################################
# Subcommands

def cmd_deriv(args):
    """Sample an expression in ``x`` and apply a fractional derivative."""
    expr = parse(args.function)
    extra = free_variables(expr) - {'x'}
    if extra:
        raise ProblemError('deriv expects an expression in x only, got %s'
                           % ', '.join(sorted(extra)))
    f = sample(expr, Grid(args.a, args.b, args.n))
    op = left_rl if args.side == 'left' else right_rl
    frame = pd.DataFrame({'x': f.x, 'f': f.values,
                          'D': op(f, args.alpha).values})
    text = table_to_csv(frame, args.output)
    if args.output is None:
        sys.stdout.write(text)
    return 0


def cmd_solve(args):
    """Solve a problem and write the ``x, y, u`` table.

    With several orders the table gets a leading ``alpha`` column and one
    summary line is printed per order.
    """
    conf = _load(args.problem, args.alpha, args.n)
    orders = [None] if conf['alpha'] is None else conf['alpha']
    opts = build_options(conf)
    if orders == [None]:
        results = [solve(build_problem(conf), opts)]
    else:
        results = alpha_sweep(partial(build_problem, conf), orders, opts,
                              n_jobs=conf['n_jobs'])
    frames = []
    for alpha, result in zip(orders, results):
        y = result.y
        line = ('alpha=%s lambda0=%.17g lambda=%.17g constraint_gap=%.3e '
                'residual_norm=%.3e iterations=%d abnormal=%s'
                % ('none' if alpha is None else '%.6g' % alpha,
                   result.lambda0, result.lam, result.constraint_gap,
                   result.residual_norm, result.iterations,
                   _bool(result.abnormal)))
        if alpha is not None and _is_eq_ex(conf):
            distance = float(np.max(np.abs(y.values - y.x ** 3 / 3.)))
            line += ' distance_to_classical=%.3e' % distance
        print(line)
        u = (np.zeros(len(y)) if alpha is None
             else left_rl(y, alpha).values)
        frame = pd.DataFrame({'x': y.x, 'y': y.values, 'u': u})
        if len(orders) > 1:
            frame.insert(0, 'alpha', alpha)
        frames.append(frame)
    if args.output is not None:
        table_to_csv(pd.concat(frames, ignore_index=True), args.output)
    return 0


def _multipliers(args, conf, p, y):
    lambda0 = (args.lambda0 if args.lambda0 is not None
               else resolve(conf['lambda0'], p.alpha))
    if p.g is None:
        return lambda0, 0.
    if args.lam is not None:
        return lambda0, args.lam
    if conf['lambda'] is not None:
        return lambda0, resolve(conf['lambda'], p.alpha)
    # least squares multiplier of the discrete stationarity condition
    g_cost = discrete_gradient(p, 'cost', y)[1:-1]
    g_con = discrete_gradient(p, 'constraint', y)[1:-1]
    denom = g_con @ g_con
    return lambda0, float(lambda0 * (g_con @ g_cost) / denom) if denom else 0.


def cmd_check(args):
    """Print the residual diagnostics of a solution table."""
    conf = _load(args.problem, None if args.alpha is None else [args.alpha])
    p = build_problem(conf)
    frame = read_table(args.solution, ('x', 'y'))
    if 'alpha' in frame.columns:
        frame = frame[np.isclose(frame['alpha'], p.alpha)]
        if not len(frame):
            raise GridMismatchError('%s has no rows for alpha=%r'
                                    % (args.solution, p.alpha))
    n = args.n if args.n is not None else len(frame) - 1
    grid = p.grid(n)
    check_nodes(frame['x'].values, grid)
    y = SampledFunction(grid, frame['y'].values)
    lambda0, lam = _multipliers(args, conf, p, y)

    print('grid: n=%d on [%.17g, %.17g]' % (grid.n, grid.a, grid.b))
    which = 'cost' if p.g is None else 'augmented'
    grad = discrete_gradient(p, which, y, lambda0, lam)[1:-1]
    print('discrete stationarity: %.3e' % np.max(np.abs(grad)))
    if p.g is not None:
        is_extremal, norm = extremal_check(p, y)
        print('extremal of I: %s (norm %.3e)' % (_bool(is_extremal), norm))
        print('not an extremal of I: %s' % _bool(not is_extremal))
    if p.has_subinterval:
        report = extended_residuals(p, y, lambda0, lam)
        print('extended residuals (lambda0=%.6g, lambda=%.12g):'
              % (lambda0, lam))
        for name in ('left_tail', 'middle', 'right_tail'):
            field = getattr(report, name)
            if field is None:
                print('  %s: absent' % name)
            else:
                print('  %s on [%.6g, %.6g]: %.3e'
                      % (name, field.grid.a, field.grid.b,
                         interior_sup(field)))
    elif p.g is not None:
        report = iso_residual(p, y, lambda0, lam)
        print('iso residual (lambda0=%.6g, lambda=%.12g): %.3e'
              % (lambda0, lam, report.sup_norm_interior))
    else:
        print('el residual: %.3e' % el_residual(p, y).sup_norm_interior)
    if 'u' in free_variables(p.L):
        try:
            _, alpha_residual = stationarity_system_check(p, y)
        except DomainError:
            print('alpha stationarity: unavailable at alpha=%.6g' % p.alpha)
        else:
            print('alpha stationarity: %.3e' % alpha_residual)
    return 0


def cmd_alpha_opt(args):
    """Locate a stationary order and tabulate the objective."""
    if args.problem == BUILTIN_PREFIX + 'psi':
        objective = psi_objective(4096 if args.n is None else args.n)
    else:
        conf = _load(args.problem, n=args.n)
        objective = family_objective(partial(build_problem, conf),
                                     build_options(conf))
    alpha_star, value = optimize_alpha(
        objective, (args.bracket_lo, args.bracket_hi))
    print('alpha_star=%.12g objective=%.17g' % (alpha_star, value))
    if args.output is not None:
        lo = args.bracket_lo if args.sweep_lo is None else args.sweep_lo
        hi = args.bracket_hi if args.sweep_hi is None else args.sweep_hi
        alphas = np.linspace(lo, hi, args.samples)
        frame = pd.DataFrame({'alpha': alphas,
                              'objective': [objective(a) for a in alphas],
                              'stationary': 0})
        star = pd.DataFrame({'alpha': [alpha_star], 'objective': [value],
                             'stationary': [1]})
        frame = pd.concat([frame, star], ignore_index=True)
        frame = frame.sort_values('alpha', kind='mergesort',
                                  ignore_index=True)
        table_to_csv(frame, args.output)
    return 0


###############################################################################
# Entry point

def get_parser():
    parser = argparse.ArgumentParser(
        prog='fracvar',
        description='Fractional calculus of variations toolkit')
    parser.add_argument('--version', action='version',
                        version='fracvar %s' % __version__)
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='Log progress to standard error (-vv for '
                        'solver iterations)')
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    deriv = subparsers.add_parser(
        'deriv', help='Riemann-Liouville derivative of an expression in x')
    deriv.add_argument('function', help='Expression in x, e.g. "x^2"')
    deriv.add_argument('--alpha', type=float, default=0.5)
    deriv.add_argument('--side', choices=('left', 'right'), default='left')
    deriv.add_argument('--a', type=float, default=0.)
    deriv.add_argument('--b', type=float, default=1.)
    deriv.add_argument('--n', type=int, default=1024)
    deriv.add_argument('--output', help='CSV file (default: standard output)')
    deriv.set_defaults(func=cmd_deriv)

    solve_ = subparsers.add_parser(
        'solve', help='Solve a problem file or builtin:eq_ex, builtin:psi')
    solve_.add_argument('problem')
    solve_.add_argument('--alpha', type=float, nargs='+',
                        help='Order(s); several orders run a sweep')
    solve_.add_argument('--n', type=int)
    solve_.add_argument('--output', help='CSV file for x, y, u')
    solve_.set_defaults(func=cmd_solve)

    check = subparsers.add_parser(
        'check', help='Residual diagnostics of a solution table')
    check.add_argument('problem')
    check.add_argument('solution', help='CSV with columns x, y')
    check.add_argument('--alpha', type=float)
    check.add_argument('--n', type=int,
                       help='Expected grid intervals (default: from table)')
    check.add_argument('--lambda', dest='lam', type=float,
                       help='Constraint multiplier (default: least squares '
                       'estimate)')
    check.add_argument('--lambda0', type=float)
    check.set_defaults(func=cmd_check)

    opt = subparsers.add_parser(
        'alpha-opt', help='Stationary order of a problem family')
    opt.add_argument('problem', help='Problem file or builtin:psi')
    opt.add_argument('--bracket-lo', type=float, default=0.5)
    opt.add_argument('--bracket-hi', type=float, default=1.)
    opt.add_argument('--sweep-lo', type=float,
                     help='Start of the tabulated range (default: bracket)')
    opt.add_argument('--sweep-hi', type=float)
    opt.add_argument('--samples', type=int, default=101)
    opt.add_argument('--n', type=int)
    opt.add_argument('--output', help='CSV file for alpha, objective')
    opt.set_defaults(func=cmd_alpha_opt)
    return parser


def main(args=None, namespace=None):
    """Run the command line; returns the exit status.

    Takes the same arguments as ArgumentParser.parse_args
    """
    parser = get_parser()
    try:
        args = parser.parse_args(args, namespace)
    except SystemExit as exc:
        return 0 if not exc.code else 1
    _setup_logging(args.verbose)
    try:
        return args.func(args)
    except USAGE_ERRORS as exc:
        return _report(exc, 1)
    except FracvarError as exc:
        return _report(exc, 2)


def _report(exc, status):
    category = getattr(exc, 'category', 'File error')
    print('fracvar: %s: %s' % (category, exc), file=sys.stderr)
    return status
