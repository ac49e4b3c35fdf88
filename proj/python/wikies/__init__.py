"""Boolean concept-query learning over a Wikipedia-style link graph."""

try:
    from ._wikies import *  # noqa: F401,F403  (installed layout)
    from ._wikies import __version__  # noqa: F401
except ImportError:  # build-tree layout: extension sits next to the package
    from _wikies import *  # noqa: F401,F403
    from _wikies import __version__  # noqa: F401
