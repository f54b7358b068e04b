# -*- coding: utf-8 -*-
r"""
Tests for the command line interface
====================================

"""
# License: 3-clause BSD

import io
import os
import sys

import numpy as np
from numpy.testing import assert_allclose
import pandas as pd
import pytest

from fracvar import __version__, path_problems
from fracvar.cli import main
from fracvar.fracops import power_rule_left, power_rule_right


def _fields(line):
    """``key=value`` pairs of a summary line."""
    return dict(token.split('=', 1) for token in line.split())


def _problem(name):
    return os.path.join(path_problems(), name)


###############################################################################
# deriv

def test_deriv_left(capsys):
    assert main(['deriv', 'x^2', '--alpha', '0.5', '--n', '256']) == 0
    out, err = capsys.readouterr()
    assert err == ''
    assert out.startswith('x,f,D\n')
    frame = pd.read_csv(io.StringIO(out), float_precision='round_trip')
    assert len(frame) == 257
    mask = frame['x'] >= 0.25
    exact = power_rule_left(2, 0.5, 0., frame['x'][mask].values)
    assert_allclose(frame['D'][mask].values, exact, rtol=2e-2)


def test_deriv_right(tmpdir, capsys):
    fname = str(tmpdir.join('right.csv'))
    assert main(['deriv', '(1 - x)^2', '--side', 'right', '--alpha', '0.3',
                 '--n', '512', '--output', fname]) == 0
    assert capsys.readouterr().out == ''
    frame = pd.read_csv(fname)
    mask = frame['x'] <= 0.9
    exact = power_rule_right(2, 0.3, 1., frame['x'][mask].values)
    assert_allclose(frame['D'][mask].values, exact, rtol=2e-2)


def test_deriv_is_deterministic(capsys):
    args = ['deriv', 'sin(pi*x)*exp(x)', '--alpha', '0.7', '--n', '64']
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first


@pytest.mark.parametrize('args, message', [
    (['x + y'], 'Problem error: deriv expects an expression in x only'),
    (['x +'], 'Syntax error'),
    (['x^2 + w'], "unknown identifier 'w' (at position 6)"),
    (['x^2', '--alpha', '1.5'], 'alpha must lie in'),
    (['x^2', '--n', '1'], 'at least 2'),
    (['ln(x - 2)'], 'Evaluation error'),
])
def test_deriv_errors(args, message, capsys):
    assert main(['deriv'] + args) == 1
    err = capsys.readouterr().err
    assert err.startswith('fracvar: ')
    assert message in err


###############################################################################
# solve

def test_solve_builtin(tmpdir, capsys):
    fname = str(tmpdir.join('solution.csv'))
    assert main(['solve', 'builtin:eq_ex', '--alpha', '1', '--n', '256',
                 '--output', fname]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1
    fields = _fields(lines[0])
    assert fields['alpha'] == '1'
    assert fields['lambda0'] == '1'
    assert fields['abnormal'] == 'false'
    assert abs(float(fields['lambda']) - 2.) <= 0.03
    assert float(fields['distance_to_classical']) <= 3e-3
    frame = pd.read_csv(fname)
    assert list(frame.columns) == ['x', 'y', 'u']
    assert len(frame) == 257
    assert_allclose(frame['y'].values, frame['x'].values ** 3 / 3.,
                    atol=3e-3)


def test_solve_sweep_file(tmpdir, capsys):
    fname = str(tmpdir.join('sweep.csv'))
    assert main(['solve', _problem('eq_ex_alpha_sweep.problem'), '--n', '64',
                 '--output', fname]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [_fields(line)['alpha'] for line in lines] == [
        '0.2', '0.5', '0.7', '0.9', '1']
    distances = [float(_fields(line)['distance_to_classical'])
                 for line in lines]
    assert distances[-1] < distances[0]
    frame = pd.read_csv(fname)
    assert list(frame.columns) == ['alpha', 'x', 'y', 'u']
    assert len(frame) == 5 * 65


def test_solve_order_override(capsys):
    assert main(['solve', _problem('eq_ex_alpha_0.5.problem'), '--alpha',
                 '0.8', '0.9', '--n', '32']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [_fields(line)['alpha'] for line in lines] == ['0.8', '0.9']


def test_solve_without_order(tmpdir, capsys):
    problem = tmpdir.join('plain.problem')
    problem.write('lagrangian = "(y - x)^2"\nn = 32\n')
    fname = str(tmpdir.join('plain.csv'))
    assert main(['solve', str(problem), '--output', fname]) == 0
    fields = _fields(capsys.readouterr().out)
    assert fields['alpha'] == 'none'
    assert 'distance_to_classical' not in fields
    frame = pd.read_csv(fname)
    # interior nodes follow x, the boundary values are zero
    assert_allclose(frame['y'].values[1:-1], frame['x'].values[1:-1],
                    atol=1e-9)
    assert np.all(frame['u'].values == 0)


def test_solve_verbose(capsys):
    assert main(['-v', 'solve', 'builtin:eq_ex', '--n', '32']) == 0
    assert 'isoperimetric solve converged' in capsys.readouterr().err
    assert main(['solve', 'builtin:eq_ex', '--n', '32']) == 0
    assert capsys.readouterr().err == ''


def test_solve_missing_file(capsys):
    assert main(['solve', 'no_such.problem']) == 1
    err = capsys.readouterr().err
    assert err.startswith('fracvar: File error: problem file')


def test_solve_bad_problem_file(tmpdir, capsys):
    problem = tmpdir.join('bad.problem')
    problem.write('lagrangian = "u^2"\nalpah = 0.5\n')
    assert main(['solve', str(problem)]) == 1
    err = capsys.readouterr().err
    assert 'Unknown key(s) in problem' in err
    assert "did you mean 'alpha'" in err


def test_solve_numerical_failure(tmpdir, capsys):
    problem = tmpdir.join('stalled.problem')
    problem.write('lagrangian = "exp(y) - x*y"\nn = 64\n'
                  'max_iterations = 1\n')
    assert main(['solve', str(problem)]) == 2
    assert 'Convergence error' in capsys.readouterr().err


def test_solve_psi(tmpdir, capsys):
    fname = str(tmpdir.join('psi.csv'))
    assert main(['solve', 'builtin:psi', '--alpha', '0.7', '--n', '256',
                 '--output', fname]) == 0
    fields = _fields(capsys.readouterr().out)
    assert fields['alpha'] == '0.7'
    frame = pd.read_csv(fname)
    mask = frame['x'].values >= 0.1
    exact = frame['x'].values[mask] ** 0.7
    assert np.max(np.abs(frame['y'].values[mask] / exact - 1.)) <= 0.05


def test_solve_infeasible(tmpdir, capsys):
    problem = tmpdir.join('infeasible.problem')
    problem.write('lagrangian = "u^2"\nconstraint = "x"\nlevel = 1\n'
                  'alpha = 0.5\nn = 32\n')
    assert main(['solve', str(problem)]) == 2
    assert 'cannot be reached' in capsys.readouterr().err


###############################################################################
# check

def test_check_round_trip(tmpdir, capsys):
    fname = str(tmpdir.join('solution.csv'))
    assert main(['solve', 'builtin:eq_ex', '--alpha', '0.5', '--n', '128',
                 '--output', fname]) == 0
    lam = float(_fields(capsys.readouterr().out)['lambda'])
    assert main(['check', 'builtin:eq_ex', fname, '--alpha', '0.5']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith('grid: n=128 on [0, 1]')
    name, value = lines[1].split(': ')
    assert name == 'discrete stationarity'
    assert float(value) <= 1e-8
    assert lines[2].startswith('extremal of I: false')
    assert lines[3] == 'not an extremal of I: true'
    assert lines[4].startswith('iso residual (lambda0=1, lambda=')
    assert_allclose(float(lines[4].split('lambda=')[1].split(')')[0]), lam,
                    rtol=1e-9)
    assert lines[5].startswith('alpha stationarity: ')
    # an explicit multiplier is used as given
    assert main(['check', 'builtin:eq_ex', fname, '--alpha', '0.5',
                 '--lambda', '3']) == 0
    out = capsys.readouterr().out
    assert 'lambda=3)' in out
    stationarity = float(out.splitlines()[1].split(': ')[1])
    assert stationarity > 1e-4


def test_check_three_sections(tmpdir, capsys):
    problem = _problem('subinterval_example.problem')
    fname = str(tmpdir.join('sub.csv'))
    assert main(['solve', problem, '--n', '64', '--output', fname]) == 0
    capsys.readouterr()
    assert main(['check', problem, fname]) == 0
    out = capsys.readouterr().out
    assert 'grid: n=64' in out
    assert 'extended residuals (lambda0=1, lambda=0):' in out
    assert '  left_tail on [0, 0.25]: ' in out
    assert '  middle on [0.25, 0.75]: ' in out
    assert '  right_tail: absent' in out
    assert 'extremal of I' not in out
    assert 'alpha stationarity: ' in out


def test_check_order_one(tmpdir, capsys):
    fname = str(tmpdir.join('classical.csv'))
    assert main(['solve', 'builtin:eq_ex', '--alpha', '1', '--n', '64',
                 '--output', fname]) == 0
    capsys.readouterr()
    assert main(['check', 'builtin:eq_ex', fname, '--alpha', '1']) == 0
    assert 'alpha stationarity: unavailable' in capsys.readouterr().out


def test_check_sweep_table(tmpdir, capsys):
    fname = str(tmpdir.join('sweep.csv'))
    assert main(['solve', 'builtin:eq_ex', '--alpha', '0.6', '0.8', '--n',
                 '64', '--output', fname]) == 0
    capsys.readouterr()
    assert main(['check', 'builtin:eq_ex', fname, '--alpha', '0.8']) == 0
    assert 'grid: n=64' in capsys.readouterr().out
    assert main(['check', 'builtin:eq_ex', fname, '--alpha', '0.7']) == 1
    assert 'has no rows for alpha' in capsys.readouterr().err


def test_check_grid_mismatch(tmpdir, capsys):
    fname = str(tmpdir.join('solution.csv'))
    assert main(['solve', 'builtin:eq_ex', '--n', '64', '--output',
                 fname]) == 0
    capsys.readouterr()
    assert main(['check', 'builtin:eq_ex', fname, '--n', '128']) == 1
    assert 'fracvar: Grid mismatch: ' in capsys.readouterr().err
    partial_table = tmpdir.join('x_only.csv')
    partial_table.write('x\n0\n1\n')
    assert main(['check', 'builtin:eq_ex', str(partial_table)]) == 1
    assert 'lacks column(s) y' in capsys.readouterr().err


###############################################################################
# alpha-opt

def test_alpha_opt_psi(tmpdir, capsys):
    fname = str(tmpdir.join('psi.csv'))
    assert main(['alpha-opt', 'builtin:psi', '--n', '1024', '--samples',
                 '11', '--output', fname]) == 0
    fields = _fields(capsys.readouterr().out)
    assert abs(float(fields['alpha_star']) - 0.901) <= 5e-3
    frame = pd.read_csv(fname)
    assert list(frame.columns) == ['alpha', 'objective', 'stationary']
    assert len(frame) == 12
    assert np.all(np.diff(frame['alpha'].values) >= 0)
    assert frame['stationary'].sum() == 1
    star = frame[frame['stationary'] == 1]
    assert_allclose(star['alpha'].values[0], float(fields['alpha_star']),
                    rtol=1e-11)
    # the stationary point is the minimum of the tabulated values
    assert star['objective'].values[0] <= frame['objective'].min() + 1e-12


def test_alpha_opt_sweep_range(tmpdir, capsys):
    fname = str(tmpdir.join('psi.csv'))
    assert main(['alpha-opt', 'builtin:psi', '--n', '256', '--samples', '5',
                 '--sweep-lo', '0.1', '--sweep-hi', '0.3', '--output',
                 fname]) == 0
    frame = pd.read_csv(fname)
    assert_allclose(frame['alpha'].values[:5], [0.1, 0.15, 0.2, 0.25, 0.3])
    assert frame['stationary'].values[-1] == 1


@pytest.mark.parametrize('args, status, message', [
    (['--bracket-lo', '0.05', '--bracket-hi', '0.2'], 2,
     'No stationary point'),
    (['--bracket-lo', '0'], 1, 'bracket must satisfy'),
])
def test_alpha_opt_errors(args, status, message, capsys):
    assert main(['alpha-opt', 'builtin:psi', '--n', '256'] + args) == status
    assert message in capsys.readouterr().err


def test_alpha_opt_problem_file(tmpdir, capsys):
    problem = tmpdir.join('family.problem')
    problem.write('lagrangian = "(u - x^2)^2"\ny_b = 0.6018022\nn = 64\n')
    assert main(['alpha-opt', str(problem), '--bracket-lo', '0.3',
                 '--bracket-hi', '0.8']) == 0
    fields = _fields(capsys.readouterr().out)
    assert abs(float(fields['alpha_star']) - 0.5) <= 0.05


###############################################################################
# Entry point

def test_usage(capsys):
    assert main(['frobnicate']) == 1
    assert 'invalid choice' in capsys.readouterr().err
    assert main([]) == 1
    assert main(['--version']) == 0
    assert __version__ in capsys.readouterr().out


def test_repeated_runs_with_replaced_stderr(tmpdir, monkeypatch):
    first = open(str(tmpdir.join('first.log')), 'w')
    monkeypatch.setattr(sys, 'stderr', first)
    assert main(['-v', 'solve', 'builtin:eq_ex', '--n', '32']) == 0
    first.close()
    second = open(str(tmpdir.join('second.log')), 'w')
    monkeypatch.setattr(sys, 'stderr', second)
    try:
        assert main(['-v', 'solve', 'builtin:eq_ex', '--n', '32']) == 0
        assert main(['deriv', 'x', '--n', '16']) == 0
    finally:
        second.close()
    assert 'isoperimetric solve converged' in tmpdir.join('first.log').read()
    assert 'isoperimetric solve converged' in tmpdir.join('second.log').read()
