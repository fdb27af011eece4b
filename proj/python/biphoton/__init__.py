"""Pulsed-pump type-I SPDC biphoton model.

SI units throughout: seconds, metres, rad/s detunings from omega0 / 2.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
