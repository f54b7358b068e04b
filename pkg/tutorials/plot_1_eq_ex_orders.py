# -*- coding: utf-8 -*-
"""
Isoperimetric example for several orders
========================================

Minimize the integral of :math:`x^4 + ({}_0D_x^\\alpha y)^2` on
:math:`[0, 1]` subject to the integral of :math:`x^2\\,{}_0D_x^\\alpha y`
being :math:`1/5`, with :math:`y(0) = 0` and
:math:`y(1) = 2/\\Gamma(\\alpha + 3)`. The minimizer is
:math:`2 x^{\\alpha + 2}/\\Gamma(\\alpha + 3)` and the multiplier is 2 for
every order; as :math:`\\alpha \\to 1` the curves approach :math:`x^3/3`.
"""

from functools import partial

import matplotlib.pyplot as plt
import numpy as np

from fracvar.problems import builtin_problem, eq_ex_solution
from fracvar.solver import SolverOptions, alpha_sweep

alphas = [0.2, 0.5, 0.7, 0.9, 1.0]
results = alpha_sweep(partial(builtin_problem, 'eq_ex'), alphas,
                      SolverOptions(n=256))

# %%
# The discrete solutions lie on top of the exact ones.

fig, ax = plt.subplots()
for alpha, result in zip(alphas, results):
    x = result.y.x
    line, = ax.plot(x, result.y.values, label=r'$\alpha=%g$' % alpha)
    ax.plot(x[::16], eq_ex_solution(alpha)(x[::16]), 'o',
            color=line.get_color(), ms=3)
ax.plot(x, x ** 3 / 3., 'k--', lw=1, label='$x^3/3$')
ax.set(xlabel='x', ylabel='y')
ax.legend()

# %%
# The multipliers stay close to 2 and the distance to the classical solution
# shrinks with the order.

for alpha, result in zip(alphas, results):
    distance = np.max(np.abs(result.y.values - result.y.x ** 3 / 3.))
    print('alpha=%.1f  lambda=%.5f  distance=%.2e'
          % (alpha, result.lam, distance))

plt.show()
