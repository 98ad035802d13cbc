"""Radial variational toolkit for the Hardy-Choquard problem family."""

try:
    from ._choquard import *  # noqa: F401,F403
    from ._choquard import __doc__  # noqa: F401
except ImportError:
    # in-tree CMake builds place the module at the top level of the build dir
    from _choquard import *  # noqa: F401,F403
