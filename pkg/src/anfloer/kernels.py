"""Kernel dispatch: compiled ``_ckernels`` when built, numpy fallback otherwise.

Set ``ANFLOER_PURE_PYTHON=1`` to force the fallback (used by the benchmark and
by the cross-implementation tests).
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if os.environ.get("ANFLOER_PURE_PYTHON") != "1":
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def winding_angle_sum(samples: np.ndarray, point: complex) -> tuple[float, float]:
    samples = np.asarray(samples, dtype=complex)
    return _impl.winding_angle_sum(np.ascontiguousarray(samples.real),
                                   np.ascontiguousarray(samples.imag),
                                   float(point.real), float(point.imag))


def polyline_self_intersects(samples: np.ndarray, closed: bool = True) -> bool:
    samples = np.asarray(samples, dtype=complex)
    return bool(_impl.polyline_self_intersects(np.ascontiguousarray(samples.real),
                                               np.ascontiguousarray(samples.imag),
                                               closed))


def gf2_rank(mat) -> int:
    mat = np.asarray(mat, dtype=np.uint8)
    if mat.size == 0:
        return 0
    return int(_impl.gf2_rank(mat))
