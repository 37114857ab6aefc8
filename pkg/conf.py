"""Sphinx configuration for the DALK documentation.
Build with ``sphinx-build . _build/html``.
"""
import os
import sys

# Packages are top-level directories of the repository.
sys.path.insert(0, os.path.abspath('.'))

project = 'DALK'
copyright = '2024, DALK developers'
version = release = '0.1'

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.coverage']
autodoc_member_order = 'bysource'

master_doc = 'index'
source_suffix = '.rst'
exclude_patterns = ['_build', 'examples', 'README.md', 'DESIGN.md', 'SPEC_FULL.md', 'spec.md']

pygments_style = 'sphinx'
html_theme = 'alabaster'
htmlhelp_basename = 'DALKdoc'
