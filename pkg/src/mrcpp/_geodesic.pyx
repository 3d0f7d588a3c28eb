# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled single-source grid Dijkstra.

Mirrors ``_geodesic_py.distance_field`` step for step: same neighbour
order, same (distance, index) heap key, so both produce bit-identical
fields.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY, sqrt

cnp.import_array()

cdef int DX[8]
cdef int DY[8]
DX[:] = [1, -1, 0, 0, 1, 1, -1, -1]
DY[:] = [0, 0, 1, -1, 1, -1, 1, -1]


cdef inline bint _less(double da, long ia, double db, long ib) nogil:
    return da < db or (da == db and ia < ib)


cdef void _push(double* hd, long* hi, long* n, double d, long i) nogil:
    cdef long pos = n[0]
    cdef long parent
    n[0] += 1
    while pos > 0:
        parent = (pos - 1) >> 1
        if _less(d, i, hd[parent], hi[parent]):
            hd[pos] = hd[parent]
            hi[pos] = hi[parent]
            pos = parent
        else:
            break
    hd[pos] = d
    hi[pos] = i


cdef void _pop(double* hd, long* hi, long* n) nogil:
    cdef long size = n[0] - 1
    cdef double d = hd[size]
    cdef long i = hi[size]
    cdef long pos = 0
    cdef long child
    n[0] = size
    if size == 0:
        return
    while True:
        child = 2 * pos + 1
        if child >= size:
            break
        if child + 1 < size and _less(hd[child + 1], hi[child + 1], hd[child], hi[child]):
            child += 1
        if _less(hd[child], hi[child], d, i):
            hd[pos] = hd[child]
            hi[pos] = hi[child]
            pos = child
        else:
            break
    hd[pos] = d
    hi[pos] = i


def distance_field(const cnp.uint8_t[:, ::1] blocked, long sx, long sy, double resolution):
    cdef long h = blocked.shape[0]
    cdef long w = blocked.shape[1]
    cdef long npix = h * w
    dist_arr = np.full(npix, np.inf, dtype=np.float64)
    pred_arr = np.full(npix, -1, dtype=np.int64)
    cdef double[::1] dist = dist_arr
    cdef long[::1] pred = pred_arr
    # lazy-deletion heap: each pixel is pushed at most 8 times
    hd_arr = np.empty(8 * npix + 1, dtype=np.float64)
    hi_arr = np.empty(8 * npix + 1, dtype=np.int64)
    cdef double[::1] hd = hd_arr
    cdef long[::1] hi = hi_arr
    cdef long n = 0
    cdef double axis = resolution
    cdef double diag = sqrt(2.0) * resolution
    cdef long src = sy * w + sx
    cdef long cur, x, y, nx, ny, nb, k
    cdef double d, nd, step
    with nogil:
        dist[src] = 0.0
        _push(&hd[0], &hi[0], &n, 0.0, src)
        while n > 0:
            d = hd[0]
            cur = hi[0]
            _pop(&hd[0], &hi[0], &n)
            if d > dist[cur]:
                continue
            y = cur // w
            x = cur - y * w
            for k in range(8):
                nx = x + DX[k]
                ny = y + DY[k]
                if nx < 0 or ny < 0 or nx >= w or ny >= h:
                    continue
                if blocked[ny, nx]:
                    continue
                if k >= 4:
                    if blocked[y, nx] or blocked[ny, x]:
                        continue
                    step = diag
                else:
                    step = axis
                nd = d + step
                nb = ny * w + nx
                if nd < dist[nb]:
                    dist[nb] = nd
                    pred[nb] = cur
                    _push(&hd[0], &hi[0], &n, nd, nb)
    return dist_arr.reshape(h, w), pred_arr.reshape(h, w)
