# cython: boundscheck=False, wraparound=False, cdivision=True
"""Hot loops: orthonormal-recurrence kernel sums over node/evaluation grids.

The A-coefficients of the three-term recurrence vanish (symmetric weight),
so a kernel evaluation is a single forward pass:

    p_0 = const,  p_k(t) = (t * p_{k-1}(t) - b[k-1] * p_{k-2}(t)) / b[k]

with b[0] = 0 as a sentinel.  All accumulations are Kahan-compensated and
run in a fixed index order, so results are bit-reproducible.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


cdef inline double _clamp(double t) nogil:
    if t > 1.0:
        return 1.0
    if t < -1.0:
        return -1.0
    return t


cdef inline double _kernel_at(double t, const double* b, const double* p1,
                              double p0, Py_ssize_t n) nogil:
    cdef double pkm1 = 0.0
    cdef double pk = p0
    cdef double pkp1, term, y, snew
    cdef double s = 0.0
    cdef double comp = 0.0
    cdef Py_ssize_t k

    term = pk * p1[0]
    y = term - comp
    snew = s + y
    comp = (snew - s) - y
    s = snew
    for k in range(1, n + 1):
        pkp1 = (t * pk - b[k - 1] * pkm1) / b[k]
        pkm1 = pk
        pk = pkp1
        term = pk * p1[k]
        y = term - comp
        snew = s + y
        comp = (snew - s) - y
        s = snew
    return s


def kernel_values(double[::1] b, double[::1] p1, double p0, double[::1] t):
    """Kernel value at each entry of t (clamped into [-1, 1])."""
    cdef Py_ssize_t n = b.shape[0] - 1
    cdef Py_ssize_t m = t.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(m):
            ov[i] = _kernel_at(_clamp(t[i]), &b[0], &p1[0], p0, n)
    return out


def weighted_kernel_sums(double[:, ::1] nodes, double[::1] coeffs,
                         double[::1] b, double[::1] p1, double p0,
                         double[:, ::1] pts, double prefac):
    """out[m] = prefac * sum_i coeffs[i] * K(nodes[i] . pts[m])."""
    cdef Py_ssize_t nn = nodes.shape[0]
    cdef Py_ssize_t dim = nodes.shape[1]
    cdef Py_ssize_t npts = pts.shape[0]
    cdef Py_ssize_t deg = b.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(npts, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i, j, d
    cdef double dot, kv, term, y, snew, s, comp
    with nogil:
        for j in range(npts):
            s = 0.0
            comp = 0.0
            for i in range(nn):
                dot = 0.0
                for d in range(dim):
                    dot += nodes[i, d] * pts[j, d]
                kv = _kernel_at(_clamp(dot), &b[0], &p1[0], p0, deg)
                term = coeffs[i] * kv
                y = term - comp
                snew = s + y
                comp = (snew - s) - y
                s = snew
            ov[j] = prefac * s
    return out


def weighted_abs_kernel_sums(double[:, ::1] nodes, double[::1] weights,
                             double[::1] b, double[::1] p1, double p0,
                             double[:, ::1] pts, double prefac):
    """out[m] = prefac * sum_i weights[i] * |K(nodes[i] . pts[m])|."""
    cdef Py_ssize_t nn = nodes.shape[0]
    cdef Py_ssize_t dim = nodes.shape[1]
    cdef Py_ssize_t npts = pts.shape[0]
    cdef Py_ssize_t deg = b.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(npts, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i, j, d
    cdef double dot, kv, term, y, snew, s, comp
    with nogil:
        for j in range(npts):
            s = 0.0
            comp = 0.0
            for i in range(nn):
                dot = 0.0
                for d in range(dim):
                    dot += nodes[i, d] * pts[j, d]
                kv = _kernel_at(_clamp(dot), &b[0], &p1[0], p0, deg)
                term = weights[i] * fabs(kv)
                y = term - comp
                snew = s + y
                comp = (snew - s) - y
                s = snew
            ov[j] = prefac * s
    return out


def abs_row_sums(double[:, ::1] mat):
    """Kahan-compensated sum of |entries| along each row."""
    cdef Py_ssize_t nrow = mat.shape[0]
    cdef Py_ssize_t ncol = mat.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(nrow, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i, j
    cdef double term, y, snew, s, comp
    with nogil:
        for i in range(nrow):
            s = 0.0
            comp = 0.0
            for j in range(ncol):
                term = fabs(mat[i, j])
                y = term - comp
                snew = s + y
                comp = (snew - s) - y
                s = snew
            ov[i] = s
    return out
