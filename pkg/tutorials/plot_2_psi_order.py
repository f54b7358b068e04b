# -*- coding: utf-8 -*-
"""
Choosing the order of the derivative
====================================

For the order dependent Lagrangian

.. math::

    L = \\left(\\frac{x^\\alpha}{\\Gamma(\\alpha + 1)} u^2
        - 2 x^\\alpha u\\right)^2

the curve :math:`\\bar y = x^\\alpha` makes :math:`\\partial_u L` vanish, so
it is stationary for every order. Its cost
:math:`\\Gamma(\\alpha + 1)^2 / (2\\alpha + 1)` depends on the order and is
smallest near :math:`\\alpha = 0.9`.
"""

import matplotlib.pyplot as plt
import numpy as np

from fracvar.problems import builtin_problem, psi_closed_form
from fracvar.fracops import Grid, SampledFunction
from fracvar.solver import (optimize_alpha, psi_objective,
                            stationarity_system_check)

objective = psi_objective(4096)
alpha_star, value = optimize_alpha(objective, (0.5, 1.))
print('stationary order %.6f, cost %.8f' % (alpha_star, value))

alphas = np.linspace(0.3, 1., 71)
fig, ax = plt.subplots()
ax.plot(alphas, [objective(a) for a in alphas], label='quadrature')
ax.plot(alphas, psi_closed_form(alphas), 'k:', label='closed form')
ax.axvline(alpha_star, color='gray', lw=1)
ax.set(xlabel=r'$\alpha$', ylabel='cost')
ax.legend()

# %%
# At the stationary order both equations of the stationarity system are
# satisfied by :math:`\bar y` up to the discretization error, while a
# perturbed curve leaves a large Euler-Lagrange residual.

grid = Grid(0., 1., 1024)
ybar = SampledFunction(grid, grid.nodes ** alpha_star)
problem = builtin_problem('psi', alpha_star)
for name, y in [('x^alpha', ybar),
                ('perturbed', ybar + 0.1 * grid.nodes * (1. - grid.nodes))]:
    el_norm, alpha_residual = stationarity_system_check(problem, y)
    print('%-10s  el residual %.2e  order residual %.2e'
          % (name, el_norm, alpha_residual))

plt.show()
