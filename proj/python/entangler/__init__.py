from ._entangler import *  # noqa: F401,F403
from ._entangler import __doc__  # noqa: F401
