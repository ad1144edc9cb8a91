"""Minkowski-dimension toolkit for spiral trajectories and entry-exit
sequences of planar dynamical systems."""

from . import flow, fracdim, models, regular, slowfast
from .errors import FracdynError

__all__ = ["models", "flow", "fracdim", "regular", "slowfast", "FracdynError"]
__version__ = "0.1.0"
