"""Operator-valued frame localization toolkit."""

from ._gflt import *  # noqa: F401,F403
from ._gflt import __version__  # noqa: F401
