# -*- coding: utf-8 -*-
r"""
Integrand expressions
=====================

A small expression language for Lagrangians :math:`L(x, y, u, v)` and
constraint integrands :math:`g(x, y, u, v)`, where ``u`` stands for the left
derivative :math:`{}_a\mathcal{D}_x^\alpha y` and ``v`` for the right
derivative :math:`{}_x\mathcal{D}_b^\beta y`. The order ``alpha`` is a read
only variable.

Sources use infix ``+ - * / ^`` with the usual precedence, parentheses,
numeric literals, the constants ``pi`` and ``e`` and the functions
``sin cos exp ln log sqrt gamma digamma polygamma``. Parsing goes through
:mod:`ast` after ``^`` is rewritten to ``**``; anything that is not plain
arithmetic is rejected.

Evaluation is vectorized: environment entries may be numpy arrays holding a
whole grid.
"""
# License: 3-clause BSD

import ast
from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from . import specfun
from .errors import (EvaluationError, ExpressionSyntaxError,
                     UnknownIdentifierError)

VARIABLES = ('x', 'y', 'u', 'v', 'alpha')
CONSTANTS = {'pi': math.pi, 'e': math.e}
UNARY_FUNCTIONS = ('sin', 'cos', 'exp', 'ln', 'gamma')
BINARY_SYMBOLS = {'add': '+', 'sub': '-', 'mul': '*', 'div': '/',
                  'pow': '^'}

_AST_BINOPS = {ast.Add: 'add', ast.Sub: 'sub', ast.Mult: 'mul',
               ast.Div: 'div', ast.Pow: 'pow'}


class Expression(object):
    """Base class of the immutable expression tree nodes."""

    def __str__(self):
        return to_source(self)


@dataclass(frozen=True)
class Constant(Expression):
    value: float

    def __post_init__(self):
        object.__setattr__(self, 'value', float(self.value))


@dataclass(frozen=True)
class Variable(Expression):
    name: str


@dataclass(frozen=True)
class Unary(Expression):
    op: str
    arg: Expression


@dataclass(frozen=True)
class Binary(Expression):
    op: str
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Polygamma(Expression):
    """``order``-th derivative of digamma; order 0 is digamma itself."""
    order: int
    arg: Expression


@dataclass(frozen=True)
class Environment:
    """Values of the expression variables, scalars or equal-length arrays."""

    x: object = 0.
    y: object = 0.
    u: object = 0.
    v: object = 0.
    alpha: object = 0.

    def __post_init__(self):
        for name in VARIABLES:
            if not np.all(np.isfinite(getattr(self, name))):
                raise EvaluationError('environment value %s is not finite'
                                      % name)


###############################################################################
# Parsing

def _rewrite_carets(source):
    """Replace ``^`` by ``**`` and keep a map back to original columns."""
    chars, origin = [], []
    for pos, char in enumerate(source):
        if char == '^':
            chars.extend('**')
            origin.extend((pos, pos))
        else:
            chars.append(char)
            origin.append(pos)
    origin.append(len(source))
    return ''.join(chars), origin


class _Converter(object):
    """Turn a Python expression AST into an :class:`Expression`."""

    def __init__(self, rewritten, origin):
        self.rewritten = rewritten
        self.origin = origin

    def position(self, node):
        col = getattr(node, 'col_offset', 0)
        # col_offset counts UTF-8 bytes
        prefix = self.rewritten.encode('utf-8')[:col]
        col = len(prefix.decode('utf-8', errors='ignore'))
        return self.origin[min(col, len(self.origin) - 1)]

    def fail(self, message, node):
        raise ExpressionSyntaxError(message, self.position(node))

    def convert(self, node):
        if isinstance(node, ast.Expression):
            return self.convert(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or \
                    not isinstance(node.value, (int, float)):
                self.fail('unsupported literal %r' % (node.value,), node)
            return Constant(node.value)
        if isinstance(node, ast.Name):
            if node.id in VARIABLES:
                return Variable(node.id)
            if node.id in CONSTANTS:
                return Constant(CONSTANTS[node.id])
            raise UnknownIdentifierError(node.id, self.position(node))
        if isinstance(node, ast.UnaryOp):
            operand = self.convert(node.operand)
            if isinstance(node.op, ast.UAdd):
                return operand
            if isinstance(node.op, ast.USub):
                if isinstance(operand, Constant):
                    return Constant(-operand.value)
                return Unary('neg', operand)
            self.fail('unsupported unary operator', node)
        if isinstance(node, ast.BinOp):
            op = _AST_BINOPS.get(type(node.op))
            if op is None:
                self.fail('unsupported operator', node)
            return Binary(op, self.convert(node.left),
                          self.convert(node.right))
        if isinstance(node, ast.Call):
            return self.convert_call(node)
        self.fail('unsupported syntax (%s)' % type(node).__name__, node)

    def convert_call(self, node):
        if not isinstance(node.func, ast.Name) or node.keywords:
            self.fail('only plain function calls are allowed', node)
        name = node.func.id
        args = node.args
        if name == 'polygamma':
            if len(args) != 2:
                self.fail('polygamma takes (order, argument)', node)
            order = args[0]
            if not (isinstance(order, ast.Constant) and
                    isinstance(order.value, int) and
                    not isinstance(order.value, bool) and order.value >= 0):
                self.fail('polygamma order must be a non-negative integer '
                          'literal', order)
            return Polygamma(order.value, self.convert(args[1]))
        if len(args) != 1:
            self.fail('%s takes exactly one argument' % name, node)
        arg = self.convert(args[0])
        if name in UNARY_FUNCTIONS:
            return Unary(name, arg)
        if name == 'log':
            return Unary('ln', arg)
        if name == 'sqrt':
            return Binary('pow', arg, Constant(0.5))
        if name == 'digamma':
            return Polygamma(0, arg)
        raise UnknownIdentifierError(name, self.position(node))


def parse(source):
    """Parse an integrand source string.

    Parameters
    ----------
    source : str
        For example ``"x^4 + u^2"``.

    Returns
    -------
    expr : Expression

    Raises
    ------
    ExpressionSyntaxError
        Malformed source, with the offending column.
    UnknownIdentifierError
        A name that is neither a variable, a constant nor a function.
    """
    if not isinstance(source, str):
        raise ExpressionSyntaxError('expression source must be a string, '
                                    'got %s' % type(source).__name__)
    if not source.strip():
        raise ExpressionSyntaxError('empty expression', 0)
    rewritten, origin = _rewrite_carets(source)
    try:
        tree = ast.parse(rewritten.strip(), mode='eval')
    except SyntaxError as exc:
        offset = max((exc.offset or 1) - 1, 0)
        offset += len(rewritten) - len(rewritten.lstrip())
        raise ExpressionSyntaxError(
            'invalid syntax', origin[min(offset, len(origin) - 1)])
    lead = len(rewritten) - len(rewritten.lstrip())
    return _Converter(rewritten[lead:], origin[lead:]).convert(tree)


def to_source(expr):
    """Render ``expr`` fully parenthesized; :func:`parse` reads it back to
    an equal tree."""
    if isinstance(expr, Constant):
        text = repr(expr.value)
        return '(%s)' % text if text.startswith('-') else text
    if isinstance(expr, Variable):
        return expr.name
    if isinstance(expr, Unary):
        if expr.op == 'neg':
            return '(-%s)' % to_source(expr.arg)
        return '%s(%s)' % (expr.op, to_source(expr.arg))
    if isinstance(expr, Polygamma):
        if expr.order == 0:
            return 'digamma(%s)' % to_source(expr.arg)
        return 'polygamma(%d, %s)' % (expr.order, to_source(expr.arg))
    if isinstance(expr, Binary):
        return '(%s %s %s)' % (to_source(expr.left),
                               BINARY_SYMBOLS[expr.op],
                               to_source(expr.right))
    raise TypeError('not an expression: %r' % (expr,))


@lru_cache(maxsize=4096)
def free_variables(expr):
    """Frozen set of variable names ``expr`` depends on."""
    if isinstance(expr, Variable):
        return frozenset([expr.name])
    if isinstance(expr, (Unary, Polygamma)):
        return free_variables(expr.arg)
    if isinstance(expr, Binary):
        return free_variables(expr.left) | free_variables(expr.right)
    return frozenset()


###############################################################################
# Evaluation

def _finite(value, what):
    if not np.all(np.isfinite(value)):
        raise EvaluationError('%s produced a non-finite value' % what)
    return value


def _any(mask):
    return bool(np.any(mask))


def _power(node, base, exponent):
    if isinstance(node.right, Constant):
        c = node.right.value
        if c < 0 and _any(base == 0):
            raise EvaluationError('0 raised to the negative power %r' % c)
        if c != int(c) and _any(base < 0):
            raise EvaluationError('negative base raised to the non-integer '
                                  'power %r' % c)
    else:
        if _any(base < 0):
            raise EvaluationError('negative base with a variable exponent '
                                  'in %s' % to_source(node))
        if _any((base == 0) & (np.asarray(exponent) < 0)):
            raise EvaluationError('0 raised to a negative power in %s'
                                  % to_source(node))
    with np.errstate(all='ignore'):
        return np.power(np.asarray(base, dtype=float), exponent)


def _evaluate(expr, env):
    if isinstance(expr, Constant):
        return expr.value
    if isinstance(expr, Variable):
        return getattr(env, expr.name)
    if isinstance(expr, Unary):
        arg = _evaluate(expr.arg, env)
        if expr.op == 'neg':
            return -arg
        if expr.op == 'ln':
            if _any(np.asarray(arg) <= 0):
                raise EvaluationError('ln of a non-positive value')
            return np.log(arg)
        if expr.op == 'gamma':
            if _any(np.asarray(arg) <= 0):
                raise EvaluationError('gamma of a non-positive value')
            return specfun.gamma(arg)
        with np.errstate(all='ignore'):
            value = {'sin': np.sin, 'cos': np.cos, 'exp': np.exp}[expr.op](arg)
        return _finite(value, expr.op)
    if isinstance(expr, Polygamma):
        arg = _evaluate(expr.arg, env)
        if _any(np.asarray(arg) <= 0):
            raise EvaluationError('polygamma of a non-positive value')
        return specfun.polygamma(expr.order, arg)
    if isinstance(expr, Binary):
        left = _evaluate(expr.left, env)
        right = _evaluate(expr.right, env)
        if expr.op == 'add':
            return left + right
        if expr.op == 'sub':
            return left - right
        if expr.op == 'mul':
            return left * right
        if expr.op == 'div':
            if _any(np.asarray(right) == 0):
                raise EvaluationError('division by zero in %s'
                                      % to_source(expr))
            return left / right
        return _finite(_power(expr, left, right), to_source(expr))
    raise TypeError('not an expression: %r' % (expr,))


def evaluate(expr, env):
    """Evaluate ``expr`` in ``env``.

    Parameters
    ----------
    expr : Expression
    env : Environment

    Returns
    -------
    value : float or ndarray
        A float when every environment entry the expression uses is a
        scalar.

    Raises
    ------
    EvaluationError
        ln or gamma of non-positive values, ``0`` to a negative power,
        negative bases with fractional exponents, overflow.
    """
    value = _finite(_evaluate(expr, env), to_source(expr))
    if np.ndim(value) == 0:
        return float(value)
    return value


###############################################################################
# Symbolic differentiation

def _is_const(expr, value=None):
    return isinstance(expr, Constant) and (value is None or
                                           expr.value == value)


def add(a, b):
    if _is_const(a) and _is_const(b):
        return Constant(a.value + b.value)
    if _is_const(a, 0.):
        return b
    if _is_const(b, 0.):
        return a
    return Binary('add', a, b)


def sub(a, b):
    if _is_const(a) and _is_const(b):
        return Constant(a.value - b.value)
    if _is_const(b, 0.):
        return a
    if _is_const(a, 0.):
        return neg(b)
    return Binary('sub', a, b)


def mul(a, b):
    if _is_const(a) and _is_const(b):
        return Constant(a.value * b.value)
    if _is_const(a, 0.) or _is_const(b, 0.):
        return Constant(0.)
    if _is_const(a, 1.):
        return b
    if _is_const(b, 1.):
        return a
    return Binary('mul', a, b)


def div(a, b):
    if _is_const(a) and _is_const(b) and b.value != 0:
        return Constant(a.value / b.value)
    if _is_const(a, 0.):
        return Constant(0.)
    if _is_const(b, 1.):
        return a
    return Binary('div', a, b)


def power(a, b):
    if _is_const(b, 0.):
        return Constant(1.)
    if _is_const(b, 1.):
        return a
    if _is_const(a) and _is_const(b) and a.value > 0:
        return Constant(a.value ** b.value)
    return Binary('pow', a, b)


def neg(a):
    if isinstance(a, Constant):
        return Constant(-a.value)
    if isinstance(a, Unary) and a.op == 'neg':
        return a.arg
    return Unary('neg', a)


@lru_cache(maxsize=4096)
def diff(expr, var):
    """Exact partial derivative of ``expr`` with respect to ``var``.

    Only constant folding is applied to the result.

    Parameters
    ----------
    expr : Expression
    var : str
        One of ``x, y, u, v, alpha``.

    Returns
    -------
    dexpr : Expression
    """
    if var not in VARIABLES:
        raise UnknownIdentifierError(var)
    if var not in free_variables(expr):
        return Constant(0.)
    if isinstance(expr, Variable):
        return Constant(1.)
    if isinstance(expr, Polygamma):
        return mul(Polygamma(expr.order + 1, expr.arg), diff(expr.arg, var))
    if isinstance(expr, Unary):
        a, da = expr.arg, diff(expr.arg, var)
        if expr.op == 'neg':
            return neg(da)
        if expr.op == 'sin':
            return mul(Unary('cos', a), da)
        if expr.op == 'cos':
            return neg(mul(Unary('sin', a), da))
        if expr.op == 'exp':
            return mul(expr, da)
        if expr.op == 'ln':
            return div(da, a)
        # gamma
        return mul(mul(expr, Polygamma(0, a)), da)
    a, b = expr.left, expr.right
    da, db = diff(a, var), diff(b, var)
    if expr.op == 'add':
        return add(da, db)
    if expr.op == 'sub':
        return sub(da, db)
    if expr.op == 'mul':
        return add(mul(da, b), mul(a, db))
    if expr.op == 'div':
        return div(sub(mul(da, b), mul(a, db)), power(b, Constant(2.)))
    # pow
    if _is_const(db, 0.):
        return mul(mul(b, power(a, sub(b, Constant(1.)))), da)
    return mul(expr, add(mul(db, Unary('ln', a)), div(mul(b, da), a)))
