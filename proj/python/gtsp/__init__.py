"""Graphical TSP toolkit: formulations, LP engine, cuts, branch and bound."""

try:
    from ._gtsp import *  # noqa: F401,F403  (installed package layout)
except ImportError:  # in-tree CMake build: _gtsp.so sits on sys.path
    from _gtsp import *  # noqa: F401,F403

__version__ = "0.1.0"
