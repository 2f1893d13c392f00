# cython: language_level=3
"""Compiled versions of the kernels in ``_pykernels``."""

from libc.math cimport atan2, fabs

import numpy as np


def winding_angle_sum(double[::1] re, double[::1] im, double px, double py):
    cdef Py_ssize_t n = re.shape[0], k, nxt
    cdef double total = 0.0, worst = 0.0, ax, ay, bx, by, step
    for k in range(n):
        nxt = k + 1 if k + 1 < n else 0
        ax = re[k] - px
        ay = im[k] - py
        bx = re[nxt] - px
        by = im[nxt] - py
        # arg(b / a) without forming the quotient
        step = atan2(ax * by - ay * bx, ax * bx + ay * by)
        total += step
        if fabs(step) > worst:
            worst = fabs(step)
    return total, worst


cdef inline double _orient(double ax, double ay, double bx, double by,
                           double cx, double cy) nogil:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def polyline_self_intersects(double[::1] re, double[::1] im, bint closed=True):
    cdef Py_ssize_t n = re.shape[0], nseg, i, j, a1, b1, a2, b2
    cdef double d1, d2, d3, d4
    nseg = n if closed else n - 1
    for i in range(nseg - 2):
        a1 = i
        b1 = i + 1 if i + 1 < n else 0
        for j in range(i + 2, nseg):
            if closed and i == 0 and j == nseg - 1:
                continue
            a2 = j
            b2 = j + 1 if j + 1 < n else 0
            d1 = _orient(re[a1], im[a1], re[b1], im[b1], re[a2], im[a2])
            d2 = _orient(re[a1], im[a1], re[b1], im[b1], re[b2], im[b2])
            d3 = _orient(re[a2], im[a2], re[b2], im[b2], re[a1], im[a1])
            d4 = _orient(re[a2], im[a2], re[b2], im[b2], re[b1], im[b1])
            if d1 * d2 <= 0 and d3 * d4 <= 0:
                return True
    return False


def gf2_rank(mat):
    cdef unsigned char[:, ::1] m = (np.asarray(mat, dtype=np.uint8) & 1).copy(order="C")
    cdef Py_ssize_t rows = m.shape[0], cols = m.shape[1]
    cdef Py_ssize_t rank = 0, col, r, p, c
    cdef unsigned char tmp
    for col in range(cols):
        if rank == rows:
            break
        p = -1
        for r in range(rank, rows):
            if m[r, col]:
                p = r
                break
        if p < 0:
            continue
        if p != rank:
            for c in range(cols):
                tmp = m[rank, c]
                m[rank, c] = m[p, c]
                m[p, c] = tmp
        for r in range(rows):
            if r != rank and m[r, col]:
                for c in range(col, cols):
                    m[r, c] ^= m[rank, c]
        rank += 1
    return rank
