"""Curve shortening flow, level-set flow and curve distances."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
