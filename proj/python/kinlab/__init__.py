"""Python access to the kinlab library."""

from ._kinlab import *  # noqa: F401,F403
from ._kinlab import __version__  # noqa: F401
