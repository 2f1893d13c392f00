"""Pure-Python (numpy) implementations of the hot kernels.

These are the reference versions; ``_ckernels.pyx`` must agree with them exactly
on integer outputs and to rounding on float outputs.
"""

from __future__ import annotations

import numpy as np


def winding_angle_sum(re, im, px: float, py: float) -> tuple[float, float]:
    """Sum of principal argument increments of ``samples - p`` around a closed polyline.

    Returns ``(total, max_abs_step)``. The polyline is closed implicitly
    (last sample connects back to the first).
    """
    w = (np.asarray(re, dtype=float) - px) + 1j * (np.asarray(im, dtype=float) - py)
    steps = np.angle(np.roll(w, -1) / w)
    return float(steps.sum()), float(np.abs(steps).max())


def _orient(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def polyline_self_intersects(re, im, closed: bool = True) -> bool:
    """True if two non-adjacent segments of the polyline touch or cross."""
    x = np.asarray(re, dtype=float)
    y = np.asarray(im, dtype=float)
    if closed:
        x = np.append(x, x[0])
        y = np.append(y, y[0])
    nseg = len(x) - 1
    ax, ay, bx, by = x[:-1], y[:-1], x[1:], y[1:]
    for i in range(nseg - 2):
        j = np.arange(i + 2, nseg)
        if closed and i == 0:
            j = j[j != nseg - 1]
        if j.size == 0:
            continue
        d1 = _orient(ax[i], ay[i], bx[i], by[i], ax[j], ay[j])
        d2 = _orient(ax[i], ay[i], bx[i], by[i], bx[j], by[j])
        d3 = _orient(ax[j], ay[j], bx[j], by[j], ax[i], ay[i])
        d4 = _orient(ax[j], ay[j], bx[j], by[j], bx[i], by[i])
        if np.any((d1 * d2 <= 0) & (d3 * d4 <= 0)):
            return True
    return False


def gf2_rank(mat) -> int:
    """Rank over GF(2) by XOR row reduction."""
    m = (np.asarray(mat, dtype=np.uint8) & 1).copy()
    rows, cols = m.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        pivots = np.nonzero(m[rank:, col])[0]
        if pivots.size == 0:
            continue
        p = rank + pivots[0]
        if p != rank:
            m[[rank, p]] = m[[p, rank]]
        below = np.nonzero(m[:, col])[0]
        below = below[below != rank]
        m[below] ^= m[rank]
        rank += 1
    return rank
