"""Data-driven structured controller design from frequency-response samples."""

try:  # installed wheel layout: extension inside the package
    from ._ldisc import *  # noqa: F401,F403
    from ._ldisc import examples  # noqa: F401
except ImportError:  # in-tree build: extension on PYTHONPATH
    from _ldisc import *  # noqa: F401,F403
    from _ldisc import examples  # noqa: F401

__version__ = "0.1.0"
