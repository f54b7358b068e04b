# -*- coding: utf-8 -*-
"""
Pytest fixtures
"""
from unittest.mock import Mock

import numpy as np
import pytest
import scipy

from fracvar import cli, problems, solver, utils, variational
from fracvar.fracops import Grid, SampledFunction


def pytest_report_header(config):
    """Add information to the pytest run header."""
    return 'numpy: %s, scipy: %s' % (np.__version__, scipy.__version__)


@pytest.fixture
def log_collector(monkeypatch):
    logger = Mock(name='FakeLogger')
    for module in (cli, problems, solver, utils, variational):
        monkeypatch.setattr(module, 'logger', logger)
    yield logger


@pytest.fixture
def eq_ex():
    """The isoperimetric example at order 0.5."""
    return problems.builtin_problem('eq_ex', 0.5)


def sampled(func, n, a=0., b=1.):
    """Samples of ``func`` on the uniform grid with ``n`` intervals."""
    grid = Grid(a, b, n)
    return SampledFunction(grid, func(grid.nodes))


def eq_ex_samples(alpha, n):
    """The exact minimizer of the isoperimetric example on a grid."""
    return sampled(problems.eq_ex_solution(alpha), n)
