# -*- coding: utf-8 -*-
r"""
Tests for problem files and the built-in problems
=================================================

"""
# License: 3-clause BSD

import glob
import os

from numpy.testing import assert_allclose
import pytest
from sphinx.errors import ConfigError

from fracvar import path_problems, problems
from fracvar.lagrangian import Expression, parse
from fracvar.problems import (builtin_conf, complete_problem_conf,
                              parse_problem_file)
from fracvar.specfun import gamma
from fracvar.variational import IsoProblem

EQ_EX_FILE = """\
# the isoperimetric example

lagrangian = "x^4 + u^2"
constraint = 'x^2*u'
  level = 0.2
alpha = [0.5, 0.9]
y_b = "2/gamma(alpha + 3)"
n = 256
"""


def test_parse_problem_file():
    conf = parse_problem_file(EQ_EX_FILE)
    assert conf == dict(lagrangian='x^4 + u^2', constraint='x^2*u',
                        level=0.2, alpha=[0.5, 0.9],
                        y_b='2/gamma(alpha + 3)', n=256)


@pytest.mark.parametrize('content, match', [
    ('lagrangian "u^2"', 'line 1: expected'),
    ('\n\n3 = 4', 'line 3: expected'),
    ('alpha = [0.5', "line 1: 'alpha' was passed invalid value"),
    ('lagrangian = u^2', "'lagrangian' was passed invalid value"),
])
def test_parse_problem_file_errors(content, match):
    with pytest.raises(ConfigError, match=match):
        parse_problem_file(content)


def test_complete_problem_conf():
    conf = complete_problem_conf(parse_problem_file(EQ_EX_FILE))
    assert conf['lagrangian'] == parse('x^4 + u^2')
    assert isinstance(conf['constraint'], Expression)
    assert conf['alpha'] == [0.5, 0.9]
    assert isinstance(conf['y_b'], Expression)
    assert conf['y_a'] == 0. and conf['a'] == 0. and conf['b'] == 1.
    assert conf['A'] is None and conf['lambda'] is None
    assert conf['n'] == 256
    assert conf['max_iterations'] == 50
    assert_allclose(problems.resolve(conf['y_b'], 0.5), 2. / gamma(3.5))
    assert problems.resolve(conf['level'], 0.5) == 0.2
    assert problems.resolve(None) is None
    conf = complete_problem_conf(dict(lagrangian='y^2', alpha=0.3))
    assert conf['alpha'] == [0.3]
    assert conf['constraint'] is None


@pytest.mark.parametrize('key, suggestion', [
    ('lagrangain', "did you mean 'lagrangian'"),
    ('kkt_tol', "did you mean 'kkt_tolerance'"),
    ('alpah', "'alpha'"),
])
def test_unknown_keys(key, suggestion):
    with pytest.raises(ConfigError, match='Unknown key') as excinfo:
        complete_problem_conf({'lagrangian': 'y^2', key: 1})
    excinfo.match(suggestion)
    # unknown keys pass through when not checked
    conf = complete_problem_conf({'lagrangian': 'y^2', key: 1},
                                 check_keys=False)
    assert conf[key] == 1


def test_unknown_key_without_suggestion():
    with pytest.raises(ConfigError) as excinfo:
        complete_problem_conf({'lagrangian': 'y^2', 'zzzzzz': 1})
    assert 'did you mean' not in str(excinfo.value)


@pytest.mark.parametrize('conf, match', [
    (dict(), "'lagrangian' is required"),
    (dict(lagrangian=3), "'lagrangian' must be a quoted expression"),
    (dict(lagrangian='x +'), "'lagrangian': "),
    (dict(lagrangian='w^2'), 'unknown identifier'),
    (dict(lagrangian='y^2', constraint='y'), 'given together'),
    (dict(lagrangian='y^2', level=1.), 'given together'),
    (dict(lagrangian='y^2', level=True, constraint='y'), 'must be a number'),
    (dict(lagrangian='y^2', y_b='2*y'), "'y_b' must be constant"),
    (dict(lagrangian='y^2', y_b=[1]), "'y_b' must be a number or"),
    (dict(lagrangian='u^2', alpha=1.5), "'alpha': alpha must lie in"),
    (dict(lagrangian='u^2', alpha=[]), 'empty'),
    (dict(lagrangian='u^2', alpha='0.5'), 'list of numbers'),
    (dict(lagrangian='y^2', n=8), 'at least 16'),
    (dict(lagrangian='y^2', n=64.), "'n' must be a positive int"),
    (dict(lagrangian='y^2', max_iterations=0), "'max_iterations'"),
    (dict(lagrangian='y^2', kkt_tolerance=-1e-9), "'kkt_tolerance'"),
    (dict(lagrangian='y^2', initial_guess='zero'), "'initial_guess'"),
    (dict(lagrangian='y^2', n_jobs=0), "'n_jobs'"),
])
def test_invalid_values(conf, match):
    with pytest.raises(ConfigError, match=match):
        complete_problem_conf(conf)


def test_build_problem():
    conf = complete_problem_conf(parse_problem_file(EQ_EX_FILE))
    with pytest.raises(ConfigError, match='pick one'):
        problems.build_problem(conf)
    p = problems.build_problem(conf, alpha=0.9)
    assert isinstance(p, IsoProblem)
    assert p.alpha == 0.9
    assert_allclose(p.y_b, 2. / gamma(3.9))
    assert p.level == 0.2
    opts = problems.build_options(conf)
    assert opts.n == 256 and opts.max_iterations == 50
    assert problems.build_options(conf, n=32).n == 32


def test_read_problem_file(tmpdir):
    fname = tmpdir.join('eq_ex.problem')
    fname.write(EQ_EX_FILE)
    conf = problems.read_problem_file(str(fname))
    assert conf['alpha'] == [0.5, 0.9]
    with pytest.raises(OSError):
        problems.read_problem_file(str(tmpdir.join('missing.problem')))


@pytest.mark.parametrize('fname', sorted(
    glob.glob(os.path.join(path_problems(), '*.problem'))))
def test_packaged_problems(fname):
    conf = problems.read_problem_file(fname)
    for alpha in conf['alpha']:
        p = problems.build_problem(conf, alpha)
        assert p.grid(conf['n']).n == 1024
        assert_allclose(p.y_b, 2. / gamma(alpha + 3.))
    if 'subinterval' in fname:
        assert p.has_subinterval and p.g is None
    else:
        assert p.level == 0.2


def test_packaged_problem_names():
    names = sorted(os.path.basename(f) for f in
                   glob.glob(os.path.join(path_problems(), '*.problem')))
    assert names == ['eq_ex_alpha_0.5.problem', 'eq_ex_alpha_1.problem',
                     'eq_ex_alpha_sweep.problem',
                     'subinterval_example.problem']


def test_builtin_problems():
    conf = builtin_conf('builtin:eq_ex', 0.7)
    assert conf['alpha'] == [0.7]
    p = problems.builtin_problem('eq_ex', 0.7)
    assert (p.L, p.g, p.level) == (parse('x^4 + u^2'), parse('x^2*u'), 0.2)
    assert_allclose(p.y_b, problems.eq_ex_solution(0.7)(1.))
    psi = problems.builtin_problem('psi', 0.9)
    assert psi.g is None and psi.y_b == 1.
    assert psi.variables == {'x', 'u', 'alpha'}
    with pytest.raises(ConfigError, match='unknown built-in problem'):
        builtin_conf('builtin:brachistochrone')


def test_closed_forms():
    assert_allclose(problems.eq_ex_solution(1.)([0., 0.5, 1.]),
                    [0., 0.125 / 3., 1. / 3.], rtol=1e-14)
    assert_allclose(problems.psi_closed_form(1.), 1. / 3., rtol=1e-14)
    assert_allclose(problems.psi_closed_form(0.5), gamma(1.5) ** 2 / 2.)
    step = 1e-6
    for alpha in (0.3, 0.901, 0.99):
        fd = (problems.psi_closed_form(alpha + step) -
              problems.psi_closed_form(alpha - step)) / (2. * step)
        assert_allclose(problems.psi_derivative_closed_form(alpha), fd,
                        rtol=1e-6, atol=1e-8)
    # the closed form is stationary near 0.901
    assert abs(problems.psi_derivative_closed_form(0.901)) <= 1e-3
