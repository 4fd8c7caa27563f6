from ._rlsc import *  # noqa: F401,F403
from ._rlsc import __doc__  # noqa: F401
