"""Spectral flow toolkit for S1 x S1 symmetric contact forms."""

from ._specflow import *  # noqa: F401,F403
from ._specflow import __doc__  # noqa: F401
