# -*- coding: utf-8 -*-
r"""
Fractional operators on uniform grids
=====================================

Left and right Riemann-Liouville derivatives of order
:math:`\alpha \in (0, 1]` discretized by the standard Grünwald-Letnikov
sums

.. math::

    {}_a\mathcal{D}_x^\alpha f(x_i) \approx h^{-\alpha}
        \sum_{k=0}^{i} w_k f(x_{i-k}), \qquad
    {}_x\mathcal{D}_b^\alpha f(x_i) \approx h^{-\alpha}
        \sum_{k=0}^{n-i} w_k f(x_{i+k}),

the product-trapezoidal fractional integral, trapezoidal quadrature and the
closed-form power rules that serve as oracles.

The continuous operators may be unbounded at the base point (the left
derivative at ``a`` unless ``f(a) = 0``, the right one at ``b`` unless
``f(b) = 0``). The discrete value there is not an approximation of
anything, so node 0 of a left derivative copies node 1 and node ``n`` of a
right derivative copies node ``n - 1``.
"""
# License: 3-clause BSD

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as _integrate
from scipy.linalg import toeplitz

from .errors import DomainError
from .specfun import check_order, gamma, gl_weights


@dataclass(frozen=True)
class Grid:
    """Uniform partition of ``[a, b]`` into ``n`` intervals.

    ``h`` defaults to ``(b - a) / n``; sub-grids pass their parent's step so
    that operators re-run on them share it exactly.
    """

    a: float
    b: float
    n: int
    h: float = field(default=None, compare=False)

    def __post_init__(self):
        a, b, n = float(self.a), float(self.b), int(self.n)
        if not a < b:
            raise DomainError('grid needs a < b, got a=%r, b=%r' % (a, b))
        if n < 2:
            raise DomainError('grid needs at least 2 intervals, got %d' % n)
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'n', n)
        if self.h is None:
            object.__setattr__(self, 'h', (b - a) / n)

    @property
    def nodes(self):
        return self.a + self.h * np.arange(self.n + 1)

    def __len__(self):
        return self.n + 1

    def index_of(self, x, rtol=1e-9):
        """Index of the node at ``x``.

        Raises
        ------
        DomainError
            If ``x`` does not coincide with a node.
        """
        pos = (float(x) - self.a) / self.h
        idx = int(round(pos))
        if idx < 0 or idx > self.n or abs(pos - idx) > rtol * self.n:
            raise DomainError('%r is not a node of %r' % (x, self))
        return idx

    def subgrid(self, i0, i1):
        """Grid over nodes ``i0 .. i1`` with the same step."""
        return Grid(self.a + i0 * self.h, self.a + i1 * self.h, i1 - i0,
                    h=self.h)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Real values at the nodes of a :class:`Grid`.

    Values are copied and made read only on construction.
    """

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (len(self.grid),):
            raise DomainError('expected %d values, got shape %s'
                              % (len(self.grid), values.shape))
        if not np.all(np.isfinite(values)):
            raise DomainError('sampled values must be finite')
        values.flags.writeable = False
        object.__setattr__(self, 'values', values)

    @property
    def x(self):
        return self.grid.nodes

    def __len__(self):
        return len(self.values)

    def _other_values(self, other):
        if isinstance(other, SampledFunction):
            if other.grid != self.grid:
                raise DomainError('sampled functions live on different '
                                  'grids')
            return other.values
        return other

    def __add__(self, other):
        return SampledFunction(self.grid,
                               self.values + self._other_values(other))

    __radd__ = __add__

    def __sub__(self, other):
        return SampledFunction(self.grid,
                               self.values - self._other_values(other))

    def __mul__(self, other):
        return SampledFunction(self.grid,
                               self.values * self._other_values(other))

    __rmul__ = __mul__

    def __neg__(self):
        return SampledFunction(self.grid, -self.values)

    def restrict(self, i0, i1):
        """Samples on nodes ``i0 .. i1`` as a function on the sub-grid."""
        return SampledFunction(self.grid.subgrid(i0, i1),
                               self.values[i0:i1 + 1])


def sample(func, grid):
    """Sample an x-only integrand or a callable on ``grid``.

    Parameters
    ----------
    func : Expression or callable
        Expressions are evaluated with every other variable at zero.
    grid : Grid

    Returns
    -------
    f : SampledFunction
    """
    from .lagrangian import Environment, Expression, evaluate
    x = grid.nodes
    if isinstance(func, Expression):
        values = evaluate(func, Environment(x=x))
    else:
        values = func(x)
    values = np.broadcast_to(np.asarray(values, dtype=float), x.shape)
    return SampledFunction(grid, values)


###############################################################################
# Grünwald-Letnikov sums on raw arrays

def gl_left_values(values, alpha, h):
    """Left GL derivative of ``values`` with step ``h``, node 0 filled."""
    values = np.asarray(values, dtype=float)
    w = gl_weights(alpha, len(values) - 1).weights
    out = np.convolve(values, w)[:len(values)] * h ** -alpha
    if len(out) > 1:
        out[0] = out[1]
    return out


def gl_right_values(values, alpha, h):
    """Right GL derivative of ``values`` with step ``h``, last node filled."""
    values = np.asarray(values, dtype=float)
    return gl_left_values(values[::-1], alpha, h)[::-1].copy()


def left_rl(f, alpha):
    """Left Riemann-Liouville derivative :math:`{}_a\\mathcal{D}_x^\\alpha f`.

    Accurate to first order when ``f(a) = 0``; this is not enforced. For
    ``alpha = 1`` the result is the backward difference.

    Parameters
    ----------
    f : SampledFunction
    alpha : float
        Order in (0, 1].

    Returns
    -------
    df : SampledFunction
    """
    alpha = check_order(alpha)
    return SampledFunction(f.grid, gl_left_values(f.values, alpha, f.grid.h))


def right_rl(f, alpha):
    """Right Riemann-Liouville derivative :math:`{}_x\\mathcal{D}_b^\\alpha f`.

    For ``alpha = 1`` this is minus the forward difference.
    """
    alpha = check_order(alpha)
    return SampledFunction(f.grid,
                           gl_right_values(f.values, alpha, f.grid.h))


def gl_matrix(grid, alpha, side='left'):
    """Dense matrix of :func:`left_rl` or :func:`right_rl`, fill rows
    included, so that ``gl_matrix(grid, alpha) @ f.values`` equals
    ``left_rl(f, alpha).values``.
    """
    alpha = check_order(alpha)
    if side not in ('left', 'right'):
        raise DomainError("side must be 'left' or 'right', got %r" % (side,))
    w = gl_weights(alpha, grid.n).weights * grid.h ** -alpha
    mat = toeplitz(w, np.zeros(grid.n + 1))
    if side == 'left':
        mat[0] = mat[1]
    else:
        mat = mat.T.copy()
        mat[-1] = mat[-2]
    return mat


###############################################################################
# Oracles

def power_rule_left(p, alpha, a, x):
    """Exact :math:`{}_a\\mathcal{D}_x^\\alpha (x - a)^p
    = \\Gamma(p + 1) / \\Gamma(p + 1 - \\alpha) (x - a)^{p - \\alpha}`.

    Parameters
    ----------
    p : float
        Power, ``p > -1`` and ``p - alpha > -1``.
    alpha : float
        Order in (0, 1].
    a : float
        Base point.
    x : float or array_like
        Evaluation point(s), ``x >= a``.
    """
    alpha = check_order(alpha)
    p = float(p)
    if not (p > -1. and p - alpha > -1.):
        raise DomainError('power rule needs p > -1 and p - alpha > -1, got '
                          'p=%r, alpha=%r' % (p, alpha))
    dist = np.asarray(x, dtype=float) - float(a)
    if np.any(dist < 0):
        raise DomainError('power rule evaluated left of the base point')
    with np.errstate(divide='ignore'):
        value = gamma(p + 1.) / gamma(p + 1. - alpha) * dist ** (p - alpha)
    return float(value) if np.ndim(x) == 0 else value


def power_rule_right(p, alpha, b, x):
    """Exact :math:`{}_x\\mathcal{D}_b^\\alpha (b - x)^p`, mirror of
    :func:`power_rule_left`."""
    dist = float(b) - np.asarray(x, dtype=float)
    if np.any(dist < 0):
        raise DomainError('power rule evaluated right of the base point')
    return power_rule_left(p, alpha, 0., dist if np.ndim(x) else float(dist))


###############################################################################
# Fractional integrals and quadrature

def _product_trapezoid_left(values, mu, h):
    n = len(values) - 1
    k = np.arange(n + 1, dtype=float)
    q = mu + 1.
    # kernel weights of f_j for j >= 1, indexed by distance i - j
    b = np.empty(n + 1)
    b[0] = 1.
    b[1:] = (k[1:] + 1.) ** q - 2. * k[1:] ** q + (k[1:] - 1.) ** q
    # weight of f_0 at node i
    a0 = np.zeros(n + 1)
    a0[1:] = (k[1:] - 1.) ** q - (k[1:] - 1. - mu) * k[1:] ** mu
    interior = np.array(values, dtype=float)
    f0 = interior[0]
    interior[0] = 0.
    out = np.convolve(interior, b)[:n + 1] + a0 * f0
    out[0] = 0.
    return out * h ** mu / gamma(mu + 2.)


def frac_integral_left(f, alpha):
    """Left RL integral of order ``1 - alpha`` (the inner operator of the
    left derivative), by product trapezoid on the piecewise linear
    interpolant of ``f``.

    Parameters
    ----------
    f : SampledFunction
    alpha : float
        Order in (0, 1).
    """
    alpha = check_order(alpha, include_one=False)
    return SampledFunction(
        f.grid, _product_trapezoid_left(f.values, 1. - alpha, f.grid.h))


def frac_integral_right(f, alpha):
    """Right RL integral of order ``1 - alpha``, mirror of
    :func:`frac_integral_left`."""
    alpha = check_order(alpha, include_one=False)
    out = _product_trapezoid_left(f.values[::-1], 1. - alpha, f.grid.h)
    return SampledFunction(f.grid, out[::-1])


def trapezoid_weights(grid, i0=0, i1=None):
    """Composite trapezoid weights for nodes ``i0 .. i1``, zero elsewhere."""
    i1 = grid.n if i1 is None else i1
    c = np.zeros(grid.n + 1)
    c[i0:i1 + 1] = grid.h
    c[i0] = c[i1] = grid.h / 2.
    return c


def integrate(f):
    """Composite trapezoid :math:`\\sum_i h (f_i + f_{i+1}) / 2`."""
    return float(_integrate.trapezoid(f.values, dx=f.grid.h))
