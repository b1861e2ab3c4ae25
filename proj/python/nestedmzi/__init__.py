"""Coherent light through a nested interferometer with vibrating mirrors."""

try:
    from ._nestedmzi import *  # noqa: F401,F403
except ImportError:  # in-tree test runs load the extension from the build dir
    from _nestedmzi import *  # noqa: F401,F403
