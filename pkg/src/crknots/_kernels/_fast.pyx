# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: batched polynomial evaluation and the Gauss
linking double sum.  Mirrors crknots._kernels.pure exactly."""

import numpy as np

cimport cython
from libc.math cimport sqrt

BACKEND = "fast"


cdef inline double complex cpow_int(double complex base, long e):
    cdef double complex out = 1.0 + 0.0j
    cdef double complex b = base
    while e > 0:
        if e & 1:
            out = out * b
        b = b * b
        e >>= 1
    return out


def poly_eval_batch(exps, coeffs, zs, ws):
    """Evaluate a sparse ambient polynomial at many points."""
    cdef long[:, ::1] E = np.ascontiguousarray(exps, dtype=np.int64)
    cdef double complex[::1] C = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef double complex[::1] Z = np.ascontiguousarray(zs, dtype=np.complex128)
    cdef double complex[::1] W = np.ascontiguousarray(ws, dtype=np.complex128)
    cdef Py_ssize_t n = Z.shape[0], t = C.shape[0]
    out_arr = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t i, s
    cdef double complex z, w, zc, wc, acc
    for i in range(n):
        z = Z[i]
        w = W[i]
        zc = z.conjugate()
        wc = w.conjugate()
        acc = 0
        for s in range(t):
            acc = acc + C[s] * cpow_int(z, E[s, 0]) * cpow_int(zc, E[s, 1]) \
                * cpow_int(w, E[s, 2]) * cpow_int(wc, E[s, 3])
        out[i] = acc
    return out_arr


def linking_sum(mid1, seg1, mid2, seg2):
    """Discrete Gauss double sum over segment pairs (before the 1/4pi)."""
    cdef double[:, ::1] M1 = np.ascontiguousarray(mid1, dtype=np.float64)
    cdef double[:, ::1] S1 = np.ascontiguousarray(seg1, dtype=np.float64)
    cdef double[:, ::1] M2 = np.ascontiguousarray(mid2, dtype=np.float64)
    cdef double[:, ::1] S2 = np.ascontiguousarray(seg2, dtype=np.float64)
    cdef Py_ssize_t n1 = M1.shape[0], n2 = M2.shape[0]
    cdef Py_ssize_t i, j
    cdef double dx, dy, dz, cx, cy, cz, d, total = 0.0
    for i in range(n1):
        for j in range(n2):
            dx = M2[j, 0] - M1[i, 0]
            dy = M2[j, 1] - M1[i, 1]
            dz = M2[j, 2] - M1[i, 2]
            cx = S1[i, 1] * S2[j, 2] - S1[i, 2] * S2[j, 1]
            cy = S1[i, 2] * S2[j, 0] - S1[i, 0] * S2[j, 2]
            cz = S1[i, 0] * S2[j, 1] - S1[i, 1] * S2[j, 0]
            d = sqrt(dx * dx + dy * dy + dz * dz)
            total += (cx * dx + cy * dy + cz * dz) / (d * d * d)
    return total
