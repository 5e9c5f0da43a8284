"""Sphinx configuration for the cuspidal-torsion API documentation."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

project = "cuspidal-torsion"
author = "Cuspidal Torsion Contributors"
release = "0.1.0"

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.napoleon",
    "sphinx.ext.mathjax",
]

napoleon_google_docstring = True
autodoc_member_order = "bysource"

html_theme = "sphinx_rtd_theme"
exclude_patterns = ["_build"]
