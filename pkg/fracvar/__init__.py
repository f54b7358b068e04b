"""
fracvar
=======

Fractional calculus of variations with Riemann-Liouville derivatives.
"""
import os
# dev versions should have "dev" in them, stable should not.
# doc/conf.py makes use of this to set the version drop-down.
__version__ = '0.1.0.dev0'


def path_problems():
    """Returns path to the packaged problem files"""
    return os.path.abspath(os.path.join(os.path.dirname(__file__),
                                        '_problems'))
