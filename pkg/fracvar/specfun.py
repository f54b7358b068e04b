# -*- coding: utf-8 -*-
r"""
Special functions
=================

Gamma-family functions and the Grünwald-Letnikov coefficient sequence used
by every discrete fractional operator.

The evaluation itself is delegated to :mod:`scipy.special`; this module
adds the domain rules the rest of the package relies on (positive
arguments only, orders in :math:`(0, 1]`).
"""
# License: 3-clause BSD

from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError, SpecialFunctionOverflow


def check_order(alpha, name='alpha', include_one=True):
    """Validate a derivative order.

    Parameters
    ----------
    alpha : float
        The order.
    name : str
        Name used in the error message.
    include_one : bool
        If False the order must lie in the open interval (0, 1).

    Returns
    -------
    alpha : float
    """
    alpha = float(alpha)
    upper_ok = alpha <= 1. if include_one else alpha < 1.
    if not (alpha > 0. and upper_ok):
        interval = '(0, 1]' if include_one else '(0, 1)'
        raise DomainError('%s must lie in %s, got %r'
                          % (name, interval, alpha))
    return alpha


def _check_positive(x, func):
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError('%s is only defined here for x > 0, got %r'
                          % (func, x))
    return arr


def _as_output(value, x):
    if np.ndim(x) == 0:
        return float(value)
    return value


def gamma(x):
    """Euler gamma function for positive arguments.

    Parameters
    ----------
    x : float or array_like
        Positive argument(s).

    Returns
    -------
    value : float or ndarray
    """
    arr = _check_positive(x, 'gamma')
    with np.errstate(over='ignore'):
        value = special.gamma(arr)
    if not np.all(np.isfinite(value)):
        raise SpecialFunctionOverflow(
            'gamma(%r) exceeds the floating point range' % (x,))
    return _as_output(value, x)


def digamma(x):
    """Logarithmic derivative of the gamma function, x > 0."""
    arr = _check_positive(x, 'digamma')
    return _as_output(special.digamma(arr), x)


def polygamma(order, x):
    """Derivative of order ``order`` of :func:`digamma`, x > 0."""
    order = int(order)
    if order < 0:
        raise DomainError('polygamma order must be >= 0, got %d' % order)
    arr = _check_positive(x, 'polygamma')
    if order == 0:
        return _as_output(special.digamma(arr), x)
    return _as_output(special.polygamma(order, arr), x)


@dataclass(frozen=True)
class GLWeights:
    """Grünwald-Letnikov coefficients :math:`w_k = (-1)^k \\binom{\\alpha}{k}`.

    Attributes
    ----------
    alpha : float
        Order in (0, 1].
    weights : ndarray
        ``w_0 .. w_N``, read only.
    """

    alpha: float
    weights: np.ndarray

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, k):
        return self.weights[k]


def gl_weights(alpha, n):
    """Coefficients ``w_0 .. w_n`` by the multiplicative recurrence.

    ``w_0 = 1`` and ``w_k = w_{k-1} (k - 1 - alpha) / k``. For ``alpha = 1``
    this collapses to the backward difference stencil ``[1, -1, 0, ...]``.

    Parameters
    ----------
    alpha : float
        Order in (0, 1].
    n : int
        Highest index, n >= 0.

    Returns
    -------
    weights : GLWeights
    """
    alpha = check_order(alpha)
    n = int(n)
    if n < 0:
        raise DomainError('number of weights must be >= 0, got %d' % n)
    k = np.arange(1, n + 1, dtype=float)
    weights = np.empty(n + 1)
    weights[0] = 1.
    weights[1:] = np.cumprod((k - 1. - alpha) / k)
    weights.flags.writeable = False
    return GLWeights(alpha, weights)


def binomial_weights_direct(alpha, n):
    """``(-1)^k binom(alpha, k)`` evaluated term by term.

    Used to cross-check :func:`gl_weights`; :func:`scipy.special.binom`
    handles the reflection for ``alpha - k + 1 <= 0``.
    """
    alpha = check_order(alpha)
    k = np.arange(int(n) + 1, dtype=float)
    return (-1.) ** k * special.binom(alpha, k)
