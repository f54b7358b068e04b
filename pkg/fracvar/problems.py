# -*- coding: utf-8 -*-
r"""
Problem files and built-in problems
===================================

A problem file is flat ``key = value`` text; values are Python literals
read with :func:`ast.literal_eval`, integrands are quoted strings in the
expression grammar of :mod:`fracvar.lagrangian`::

    # isoperimetric example
    lagrangian = "x^4 + u^2"
    constraint = "x^2*u"
    level = 0.2
    alpha = 0.5
    y_b = "2/gamma(alpha + 3)"
    n = 1024

Numeric keys also accept a quoted constant expression, which may use
``alpha``. A list of orders turns a solve into a sweep.

:data:`DEFAULT_PROBLEM_CONF` lists every key; unknown keys are rejected
with a suggestion, as Sphinx does for its own configuration.
"""
# License: 3-clause BSD

import ast
import codecs
import copy
from difflib import get_close_matches
import numbers
import os
import re

import numpy as np
from sphinx.errors import ConfigError
from sphinx.util.logging import getLogger

from .errors import DomainError, ExpressionError
from .lagrangian import Environment, evaluate, free_variables, parse
from .solver import SolverOptions
from .specfun import check_order, digamma, gamma
from .variational import IsoProblem

logger = getLogger('fracvar')

DEFAULT_PROBLEM_CONF = {
    'lagrangian': None,
    'constraint': None,
    'level': None,
    'alpha': None,
    'beta': None,
    'a': 0.,
    'b': 1.,
    'A': None,
    'B': None,
    'y_a': 0.,
    'y_b': 0.,
    'n': 1024,
    'max_iterations': 50,
    'kkt_tolerance': 1e-9,
    'abnormal_gradient_tolerance': 1e-8,
    'initial_guess': 'linear',
    'lambda0': 1.,
    'lambda': None,
    'n_jobs': 1,
}

NUMERIC_KEYS = ('level', 'beta', 'a', 'b', 'A', 'B', 'y_a', 'y_b',
                'lambda0', 'lambda')

PROBLEM_LINE_PATTERN = re.compile(
    r"^[ \t]*([A-Za-z_][A-Za-z0-9_]*)[ \t]*=[ \t]*(.+?)[ \t]*$")

BUILTIN_PREFIX = 'builtin:'

EQ_EX_LAGRANGIAN = 'x^4 + u^2'
EQ_EX_CONSTRAINT = 'x^2*u'
EQ_EX_LEVEL = 0.2
PSI_LAGRANGIAN = '((x^alpha/gamma(alpha + 1))*u^2 - 2*x^alpha*u)^2'


###############################################################################
# Problem files

def parse_problem_file(content):
    """Raw ``key: value`` dict of a problem file's text.

    Blank lines and lines starting with ``#`` are skipped.
    """
    conf = {}
    for lineno, line in enumerate(content.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith('#'):
            continue
        match = PROBLEM_LINE_PATTERN.match(line)
        if match is None:
            raise ConfigError('line %d: expected "key = value", got %r'
                              % (lineno, line))
        key, value = match.group(1), match.group(2)
        try:
            conf[key] = ast.literal_eval(value)
        except (SyntaxError, ValueError):
            raise ConfigError('line %d: %r was passed invalid value %s'
                              % (lineno, key, value))
    return conf


def read_problem_file(filename):
    """Parse and complete the problem file ``filename``."""
    with codecs.open(filename, 'r', 'utf-8') as fid:
        content = fid.read()
    logger.debug('[fracvar] reading problem file %s',
                 os.path.basename(filename))
    return complete_problem_conf(parse_problem_file(content))


def _constant(key, value):
    """Float, or parsed constant expression in ``alpha``."""
    if isinstance(value, bool):
        raise ConfigError('%r must be a number, got %r' % (key, value))
    if isinstance(value, numbers.Real):
        return float(value)
    if isinstance(value, str):
        try:
            expr = parse(value)
        except ExpressionError as exc:
            raise ConfigError('%r: %s' % (key, exc))
        extra = free_variables(expr) - {'alpha'}
        if extra:
            raise ConfigError('%r must be constant, but %r uses %s'
                              % (key, value, ', '.join(sorted(extra))))
        return expr
    raise ConfigError('%r must be a number or a quoted constant expression, '
                      'got %r' % (key, value))


def _integrand(key, value):
    if not isinstance(value, str):
        raise ConfigError('%r must be a quoted expression, got %r'
                          % (key, value))
    try:
        return parse(value)
    except ExpressionError as exc:
        raise ConfigError('%r: %s' % (key, exc))


def _orders(value):
    values = list(value) if isinstance(value, (list, tuple)) else [value]
    if not values:
        raise ConfigError("'alpha' must not be an empty list")
    out = []
    for alpha in values:
        if isinstance(alpha, bool) or not isinstance(alpha, numbers.Real):
            raise ConfigError("'alpha' must be a number or a list of "
                              "numbers, got %r" % (alpha,))
        try:
            out.append(check_order(alpha))
        except DomainError as exc:
            raise ConfigError("'alpha': %s" % (exc,))
    return out


def _positive(conf, key, kind):
    value = conf[key]
    if isinstance(value, bool) or not isinstance(value, kind) or \
            not value > 0:
        raise ConfigError('%r must be a positive %s, got %r'
                          % (key, kind.__name__, value))


def complete_problem_conf(problem_conf, check_keys=True):
    """Merge ``problem_conf`` into the defaults and validate it.

    Integrands are parsed, numeric keys turned into floats or constant
    expressions and ``alpha`` into a list of orders (``None`` when absent).

    Raises
    ------
    sphinx.errors.ConfigError
        Unknown keys, with close matches suggested, or invalid values,
        naming the key.
    """
    conf = copy.deepcopy(DEFAULT_PROBLEM_CONF)
    options = sorted(conf)
    extra_keys = sorted(set(problem_conf) - set(options))
    if extra_keys and check_keys:
        msg = 'Unknown key(s) in problem:\n'
        for key in extra_keys:
            options = get_close_matches(key, sorted(conf), cutoff=0.66)
            msg += repr(key)
            if len(options) == 1:
                msg += ', did you mean %r?' % (options[0],)
            elif len(options) > 1:
                msg += ', did you mean one of %r?' % (options,)
            msg += '\n'
        raise ConfigError(msg.strip())
    conf.update(problem_conf)

    if conf['lagrangian'] is None:
        raise ConfigError("'lagrangian' is required")
    conf['lagrangian'] = _integrand('lagrangian', conf['lagrangian'])
    if conf['constraint'] is not None:
        conf['constraint'] = _integrand('constraint', conf['constraint'])
    if (conf['constraint'] is None) != (conf['level'] is None):
        raise ConfigError("'constraint' and 'level' must be given together")
    for key in NUMERIC_KEYS:
        if conf[key] is not None:
            conf[key] = _constant(key, conf[key])
    if conf['alpha'] is not None:
        conf['alpha'] = _orders(conf['alpha'])
    for key in ('n', 'max_iterations'):
        _positive(conf, key, int)
    if conf['n'] < 16:
        raise ConfigError("'n' must be at least 16, got %r" % (conf['n'],))
    for key in ('kkt_tolerance', 'abnormal_gradient_tolerance'):
        _positive(conf, key, numbers.Real)
    if conf['initial_guess'] != 'linear':
        raise ConfigError("'initial_guess' must be 'linear' in a problem "
                          "file, got %r" % (conf['initial_guess'],))
    if isinstance(conf['n_jobs'], bool) or \
            not isinstance(conf['n_jobs'], int) or conf['n_jobs'] == 0:
        raise ConfigError("'n_jobs' must be a non-zero integer, got %r"
                          % (conf['n_jobs'],))
    return conf


def resolve(value, alpha=None):
    """Numeric value of a completed numeric key at order ``alpha``."""
    if value is None or isinstance(value, float):
        return value
    return evaluate(value, Environment(alpha=0. if alpha is None else alpha))


def build_problem(conf, alpha=None):
    """:class:`~fracvar.variational.IsoProblem` of a completed config.

    Parameters
    ----------
    conf : dict
        Output of :func:`complete_problem_conf`.
    alpha : float, optional
        Required when ``conf['alpha']`` lists several orders.
    """
    if alpha is None and conf['alpha'] is not None:
        if len(conf['alpha']) > 1:
            raise ConfigError("'alpha' lists %d orders; pick one"
                              % len(conf['alpha']))
        alpha = conf['alpha'][0]
    values = {key: resolve(conf[key], alpha) for key in NUMERIC_KEYS}
    return IsoProblem(
        L=conf['lagrangian'], g=conf['constraint'], level=values['level'],
        alpha=alpha, beta=values['beta'], a=values['a'], b=values['b'],
        A=values['A'], B=values['B'], y_a=values['y_a'], y_b=values['y_b'])


def build_options(conf, **overrides):
    """:class:`~fracvar.solver.SolverOptions` of a completed config."""
    kwargs = dict(n=conf['n'], max_iterations=conf['max_iterations'],
                  kkt_tolerance=conf['kkt_tolerance'],
                  abnormal_gradient_tolerance=conf[
                      'abnormal_gradient_tolerance'])
    kwargs.update(overrides)
    return SolverOptions(**kwargs)


###############################################################################
# Built-in problems

def builtin_conf(name, alpha=0.5):
    """Completed config of a built-in problem, ``eq_ex`` or ``psi``.

    ``eq_ex`` minimizes the integral of ``x^4 + u^2`` subject to the
    integral of ``x^2 u`` being ``1/5``. ``psi`` is the order-dependent
    problem whose stationary solution is ``x^alpha``.
    """
    if name.startswith(BUILTIN_PREFIX):
        name = name[len(BUILTIN_PREFIX):]
    if name == 'eq_ex':
        conf = dict(lagrangian=EQ_EX_LAGRANGIAN, constraint=EQ_EX_CONSTRAINT,
                    level=EQ_EX_LEVEL, alpha=alpha,
                    y_b='2/gamma(alpha + 3)')
    elif name == 'psi':
        conf = dict(lagrangian=PSI_LAGRANGIAN, alpha=alpha, y_b=1.)
    else:
        raise ConfigError('unknown built-in problem %r, expected eq_ex or psi'
                          % (name,))
    return complete_problem_conf(conf)


def builtin_problem(name, alpha=0.5):
    """IsoProblem of a built-in problem at order ``alpha``."""
    return build_problem(builtin_conf(name, alpha))


def eq_ex_solution(alpha):
    """Exact minimizer ``2 x^(alpha + 2) / gamma(alpha + 3)`` of ``eq_ex``,
    as a callable of the nodes."""
    alpha = check_order(alpha)
    coef = 2. / gamma(alpha + 3.)

    def solution(x):
        return coef * np.asarray(x, dtype=float) ** (alpha + 2.)

    return solution


def psi_closed_form(alpha):
    """``gamma(alpha + 1)^2 / (2 alpha + 1)``."""
    return gamma(alpha + 1.) ** 2 / (2. * alpha + 1.)


def psi_derivative_closed_form(alpha):
    """Derivative of :func:`psi_closed_form` in ``alpha``."""
    return 2. * psi_closed_form(alpha) * (digamma(alpha + 1.) -
                                          1. / (2. * alpha + 1.))
