"""Python face of the sandglass toolkit (thin re-export of the native module)."""

from ._sandglass import *  # noqa: F401,F403
from ._sandglass import __version__  # noqa: F401
