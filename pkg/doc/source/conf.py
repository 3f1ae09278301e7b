# lipsolve documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing dir.

import os
import sys

sys.path.insert(0, os.path.abspath("../../"))

import alabaster

from lipsolve import __package__
from lipsolve._version import __version__

# -- General configuration -----------------------------------------------------

extensions = [
    "alabaster",
    "sphinx.ext.autodoc",
    "sphinx.ext.intersphinx",
    "sphinx_copybutton",
]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = __package__
copyright = "2026, the lipsolve developers"
version = __version__
release = __version__

exclude_patterns = []
pygments_style = "sphinx"

# -- Options for HTML output ---------------------------------------------------

html_theme = "alabaster"
html_theme_options = {
    "description": "Latent information priors for finite models",
}
html_theme_path = [alabaster.get_path()]
html_sidebars = {"**": ["about.html", "navigation.html", "searchbox.html"]}
html_show_sourcelink = False
htmlhelp_basename = "lipsolvedoc"

# -- Options for manual page output --------------------------------------------

man_pages = [("index", "lipsolve", "lipsolve documentation", ["the lipsolve developers"], 1)]

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "pandas": ("https://pandas.pydata.org/docs/", None),
}
