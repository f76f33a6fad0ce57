"""Capacity bounds, gap verification and numerical oracles for compound Gaussian dirty-paper channels."""

from .errors import CcdpError
from .rates import CANONICAL, PRINTED, RateBound

__version__ = "0.1.0"
