# -*- coding: utf-8 -*-
#
# pyEntangle documentation build configuration file.

import sys
import os

import sphinx_rtd_theme
from recommonmark.parser import CommonMarkParser

source_parsers = {'.md': CommonMarkParser}
source_suffix = ['.rst', '.md']

# The package is imported from the repository root rather than an installed copy
sys.path.insert(0, os.path.abspath('../../'))
from pyEntangle import __release__, __version__

html_theme = "sphinx_rtd_theme"
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.coverage',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon',
]

templates_path = ['_templates']
master_doc = 'index'

project = 'pyEntangle'
copyright = '2026, pyEntangle contributors'
author = 'pyEntangle contributors'

version = __version__
release = __release__

language = None
exclude_patterns = []
pygments_style = 'sphinx'
todo_include_todos = False

autodoc_member_order = 'bysource'

html_static_path = ['_static']
htmlhelp_basename = 'pyEntangledoc'

latex_elements = {
}
latex_documents = [
    (master_doc, 'pyEntangle.tex', 'pyEntangle Documentation', author, 'manual'),
]

man_pages = [
    (master_doc, 'pyentangle', 'pyEntangle Documentation', [author], 1)
]

texinfo_documents = [
    (master_doc, 'pyEntangle', 'pyEntangle Documentation', author, 'pyEntangle',
     'Entanglement flow through simulated Grover and HHL circuits.', 'Science'),
]
