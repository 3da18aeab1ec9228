# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

# type: ignore
# Sphinx configuration for the ddbench docs.

import sys
from pathlib import Path

from recommonmark.transform import AutoStructify

root_dir = Path(__file__).resolve().parent.parent.parent
# autodoc imports ddbench from the checkout, not from site-packages
sys.path.insert(0, str(root_dir))

project = "ddbench"
copyright = "Copyright © ddbench contributors"
author = "ddbench contributors"
release = (root_dir / "version.txt").read_text().strip()

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosectionlabel",
    "sphinx.ext.napoleon",
    "sphinx.ext.mathjax",
    "sphinx.ext.intersphinx",
    "sphinx.ext.viewcode",
    "recommonmark",
]

# section labels are referenced as "document:Section"
autosectionlabel_prefix_document = True

napoleon_google_docstring = True
napoleon_numpy_docstring = False
napoleon_use_rtype = False
autodoc_member_order = "bysource"
autodoc_typehints = "description"

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "pandas": ("https://pandas.pydata.org/docs/", None),
    "torch": ("https://pytorch.org/docs/stable/", None),
}

templates_path = ["_templates"]
source_suffix = [".rst", ".md"]
master_doc = "index"

html_theme = "pytorch_sphinx_theme"
html_theme_options = {
    "includehidden": True,
    "pytorch_project": "docs",
    "logo_only": False,
}
htmlhelp_basename = "ddbenchdocs"


# .md pages may embed rst blocks and math
def setup(app):
    app.add_config_value(
        "recommonmark_config",
        {
            "auto_toc_tree_section": "Contents",
            "enable_math": True,
            "enable_inline_math": True,
            "enable_eval_rst": True,
        },
        True,
    )
    app.add_transform(AutoStructify)
