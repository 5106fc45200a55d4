"""Pseudo-spectral solvers for sinc-type and classical MBE gradient flows."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
