# -*- coding: utf-8 -*-
"""
Utilities
=========

CSV input and output for the command line.
"""
# License: 3-clause BSD

import hashlib
import os
from shutil import move

import numpy as np
import pandas as pd
from sphinx.util.logging import getLogger

from .errors import GridMismatchError

logger = getLogger('fracvar')

FLOAT_FORMAT = '%.17g'


def get_md5sum(src_file):
    """md5 hex digest of the bytes of ``src_file``."""
    with open(src_file, 'rb') as src_data:
        return hashlib.md5(src_data.read()).hexdigest()


def _replace_md5(fname_new, fname_old=None):
    """Move ``fname_new`` over ``fname_old`` unless their contents agree."""
    if fname_old is None:
        assert fname_new.endswith('.new')
        fname_old = os.path.splitext(fname_new)[0]
    if os.path.isfile(fname_old) and (get_md5sum(fname_old) ==
                                      get_md5sum(fname_new)):
        os.remove(fname_new)
    else:
        move(fname_new, fname_old)
    assert os.path.isfile(fname_old)


def table_to_csv(frame, fname=None):
    """Write ``frame`` with a header, 17 significant digits and LF endings.

    Parameters
    ----------
    frame : pandas.DataFrame
    fname : str or None
        Destination; ``None`` returns the text instead. An existing file
        with identical contents is left untouched.
    """
    kwargs = dict(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    if fname is None:
        return frame.to_csv(**kwargs)
    fname_new = fname + '.new'
    frame.to_csv(fname_new, **kwargs)
    _replace_md5(fname_new, fname)
    logger.info('[fracvar] wrote %s (%d rows)', fname, len(frame))
    return fname


def read_table(fname, columns):
    """Read a CSV written by :func:`table_to_csv`, checking ``columns``."""
    frame = pd.read_csv(fname, float_precision='round_trip')
    missing = [col for col in columns if col not in frame.columns]
    if missing:
        raise GridMismatchError('%s lacks column(s) %s'
                                % (fname, ', '.join(missing)))
    return frame


def check_nodes(x, grid, rtol=1e-12):
    """Raise :class:`GridMismatchError` unless ``x`` are the nodes of
    ``grid``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (len(grid),) or not np.allclose(
            x, grid.nodes, rtol=0, atol=rtol * (grid.b - grid.a)):
        raise GridMismatchError(
            'the %d nodes in the table do not match the problem grid '
            '(n=%d on [%r, %r])' % (len(x), grid.n, grid.a, grid.b))
