from pathlib import Path

import cliffbell as cb

this_dir = Path(__file__).resolve().parent
src_dir = (this_dir / ".." / ".." / "src").resolve()

# -- Project information -----------------------------------------------------

project = "cliffbell"
copyright = "The cliffbell developers"
author = "The cliffbell developers"

release = f"{cb.__version__}"

# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.napoleon",  # numpy docstrings
    "autoapi.extension",  # automatically create the module documentation
    "sphinx.ext.mathjax",
    "sphinx.ext.doctest",
    "sphinx_design",
    "traits.util.trait_documenter",
]

# auto api configuration
autoapi_type = "python"
autoapi_dirs = [src_dir / "cliffbell"]
autoapi_add_toctree_entry = False
autoapi_options = ["members", "show-inheritance"]
autoapi_skip_classes = ["ActorHandler", "SamplerActor", "log_execution_time"]
autoapi_python_class_content = "both"

# -- Options for HTML output -------------------------------------------------

html_theme = "pydata_sphinx_theme"
html_theme_options = {
    "logo": {
        "alt_text": "cliffbell - Home",
        "text": "cliffbell",
    },
    "icon_links": [
        {
            "name": "GitHub",
            "url": "https://github.com/cliffbell/cliffbell",
            "icon": "fa-brands fa-square-github",
        },
    ],
    "pygments_light_style": "tango",
    "pygments_dark_style": "monokai",
}
html_last_updated_fmt = "%b %d, %Y"
html_copy_source = False


def skip_classes(app, what, name, obj, skip, options):
    if what in ("class", "function"):
        return any(name.endswith(cls_name) for cls_name in autoapi_skip_classes)
    return skip


def setup(sphinx):
    sphinx.connect("autoapi-skip-member", skip_classes)
