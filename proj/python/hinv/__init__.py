"""Harmonic-measure inversion: build f from an h-function and verify it by Monte Carlo."""

from ._hinv import *  # noqa: F401,F403
from ._hinv import __doc__  # noqa: F401
