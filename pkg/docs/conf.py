#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# drillsim documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

import drillsim  # noqa: E402

# -- General configuration ---------------------------------------------

extensions = [
    'm2r2',
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.autosectionlabel',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx.ext.napoleon',
    'sphinx_toolbox.collapse',
]

autosummary_generate = True
autodoc_typehints = 'none'
autosectionlabel_prefix_document = True

source_suffix = ['.rst', '.md']
master_doc = 'index'

project = 'drillsim'
slug = 'drillsim'
title = project + ' Documentation'
copyright = '2026, drillsim developers'
author = 'drillsim developers'
description = 'Nonlinear stochastic dynamics of horizontal drillstrings.'

version = drillsim.__version__
release = drillsim.__version__

language = None
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'
todo_include_todos = False

# -- Options for HTML output -------------------------------------------

html_theme = 'pydata_sphinx_theme'
html_theme_options = {
    'show_prev_next': True,
}
htmlhelp_basename = slug + 'doc'

# -- Options for LaTeX output ------------------------------------------

latex_documents = [(
    master_doc,
    slug + '.tex',
    title,
    author,
    'manual'
)]

man_pages = [(
    master_doc,
    slug,
    title,
    [author],
    1
)]
