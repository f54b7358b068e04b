# -*- coding: utf-8 -*-
#
# fracvar documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys
from datetime import date

from sphinx_gallery.sorting import FileNameSortKey
import sphinx_rtd_theme

sys.path.insert(0, os.path.abspath('..'))
import fracvar  # noqa: E402

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
    'sphinx.ext.autosummary',
    'sphinx.ext.doctest',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx_gallery.gen_gallery',
]

templates_path = ['_templates']

# generate autosummary even if no references
autosummary_generate = True

source_suffix = '.rst'
master_doc = 'index'

project = u'fracvar'
copyright = u'2023-%s, fracvar developers' % date.today().year

# The short X.Y version.
version = fracvar.__version__
# The full version, including alpha/beta/rc tags.
release = fracvar.__version__ + '-git'

exclude_patterns = ['_build']

# See warnings about bad links
nitpicky = True

pygments_style = 'sphinx'
highlight_language = 'python3'

# -- Options for HTML output ----------------------------------------------

# The theme is set by the make target
html_theme = os.environ.get('FRACVAR_THEME', 'rtd')

if html_theme == 'rtd':
    html_theme = 'sphinx_rtd_theme'
    html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]

html_show_sourcelink = False
htmlhelp_basename = 'fracvardoc'

# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
    ('index', 'fracvar.tex', u'fracvar Documentation',
     u'fracvar developers', 'manual'),
]

man_pages = [
    ('index', 'fracvar', u'fracvar Documentation',
     [u'fracvar developers'], 1)
]

intersphinx_mapping = {
    'python': ('https://docs.python.org/{.major}'.format(sys.version_info),
               None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
    'matplotlib': ('https://matplotlib.org/stable', None),
    'sphinx': ('https://www.sphinx-doc.org/en/master', None),
    'pandas': ('https://pandas.pydata.org/pandas-docs/stable/', None),
    'joblib': ('https://joblib.readthedocs.io/en/latest/', None),
}

min_reported_time = 0
if 'SOURCE_DATE_EPOCH' in os.environ:
    min_reported_time = sys.maxsize

sphinx_gallery_conf = {
    'backreferences_dir': 'gen_modules/backreferences',
    'doc_module': ('fracvar',),
    'reference_url': {
        'fracvar': None,
    },
    'examples_dirs': ['../tutorials'],
    'gallery_dirs': ['auto_tutorials'],
    'image_scrapers': ('matplotlib',),
    # specify the order of examples to be according to filename
    'within_subsection_order': FileNameSortKey,
    'min_reported_time': min_reported_time,
    'show_memory': False,
    'capture_repr': ('_repr_html_', '__repr__'),
}
