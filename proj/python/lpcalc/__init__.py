"""Littlewood-Paley norms, bilinear operators and experiments on periodic grids."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, LpcalcError, GateViolation  # noqa: F401
