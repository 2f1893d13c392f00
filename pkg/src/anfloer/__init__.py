"""Z/2 self-Floer cohomology of immersed matching spheres in xy = (z-1)...(z-N)."""

from __future__ import annotations

from .errors import AnfloerError, NumericalError, ValidationError
from .kernels import BACKEND
from .variety import SurfaceParams, SurfacePoint, TangentVector

__version__ = "0.1.0"

__all__ = [
    "AnfloerError",
    "BACKEND",
    "NumericalError",
    "SurfaceParams",
    "SurfacePoint",
    "TangentVector",
    "ValidationError",
]
