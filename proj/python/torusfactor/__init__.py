"""Python access to the torusfactor core library."""

from ._torusfactor import *  # noqa: F401,F403
from ._torusfactor import __version__  # noqa: F401
