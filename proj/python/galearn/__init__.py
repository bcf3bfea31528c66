"""Greedy batch-mode active learning: python surface over the C++ core."""

try:
    from galearn._core import *  # noqa: F401,F403  (wheel layout)
except ImportError:  # in-tree builds expose _core directly on sys.path
    from _core import *  # noqa: F401,F403

__version__ = "0.1.0"
