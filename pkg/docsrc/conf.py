# Configuration file for the Sphinx documentation builder.
#
# This file does only contain a selection of the most common options. For a
# full list see the documentation:
# http://www.sphinx-doc.org/en/master/config

# -- Path setup --------------------------------------------------------------

import os
import sys
sys.path.insert(0, os.path.abspath('..'))


# -- Project information -----------------------------------------------------

project = 'nlturbo'
import datetime
copyright = u'2024-{}, nlturbo developers'.format(datetime.date.today().year)
author = 'nlturbo developers'

from nlturbo.config import __version__
# The short X.Y version
version = __version__
# The full version, including alpha/beta/rc tags
release = __version__


# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.coverage',
    'sphinx.ext.autosummary',
    'sphinx.ext.autosectionlabel',
    'sphinx.ext.mathjax'
]

autodoc_default_options = {'members': True, 'undoc-members': True, 'show-inheritance': True}
autosummary_generate = True

source_suffix = '.rst'
master_doc = 'index'
language = 'en'
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'


# -- Options for HTML output -------------------------------------------------

try:
    import sphinx_bootstrap_theme
    html_theme = 'bootstrap'
    html_theme_path = sphinx_bootstrap_theme.get_html_theme_path()
    html_theme_options = {
        'bootswatch_theme': "lumen",
        'navbar_sidebarrel': False,
        'bootstrap_version': "3",
        'navbar_pagenav': True,
        'navbar_links': [("Overview", "overview"),
                         ("File Types", "file_types"),
                         ("API", "api")
                        ]
    }
except ImportError:
    html_theme = 'default'

html_show_sourcelink = False
htmlhelp_basename = 'nlturbodoc'


# -- Options for manual page output ------------------------------------------

man_pages = [
    (master_doc, 'nlturbo', 'nlturbo Documentation',
     [author], 1)
]
