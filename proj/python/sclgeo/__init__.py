from ._sclgeo import *  # noqa: F401,F403
