"""Pure-NumPy fallback for the compiled kernel loops.

Same contract as the extension module `_kernels`: Kahan-compensated sums
in a fixed index order, kernel arguments clamped into [-1, 1].  The
recurrence is vectorised over evaluation points; the compensated reduction
runs node by node over vector lanes.
"""

import numpy as np

_CHUNK = 2048


def kernel_values(b, p1, p0, t):
    """Kernel value at each entry of t (any shape), clamped into [-1, 1]."""
    t = np.clip(np.asarray(t, dtype=float), -1.0, 1.0)
    n = b.shape[0] - 1
    pkm1 = np.zeros_like(t)
    pk = np.full_like(t, p0)
    s = np.zeros_like(t)
    comp = np.zeros_like(t)
    _kahan_add(s, comp, pk * p1[0])
    for k in range(1, n + 1):
        pkp1 = (t * pk - b[k - 1] * pkm1) / b[k]
        pkm1 = pk
        pk = pkp1
        _kahan_add(s, comp, pk * p1[k])
    return s


def _kahan_add(s, comp, term):
    y = term - comp
    snew = s + y
    comp[...] = (snew - s) - y
    s[...] = snew


def _kahan_reduce(mat):
    # compensated sum over axis 0, row order fixed
    s = np.zeros(mat.shape[1])
    comp = np.zeros(mat.shape[1])
    for i in range(mat.shape[0]):
        _kahan_add(s, comp, mat[i])
    return s


def weighted_kernel_sums(nodes, coeffs, b, p1, p0, pts, prefac):
    """out[m] = prefac * sum_i coeffs[i] * K(nodes[i] . pts[m])."""
    return _kernel_reduction(nodes, coeffs, b, p1, p0, pts, prefac, absolute=False)


def weighted_abs_kernel_sums(nodes, weights, b, p1, p0, pts, prefac):
    """out[m] = prefac * sum_i weights[i] * |K(nodes[i] . pts[m])|."""
    return _kernel_reduction(nodes, weights, b, p1, p0, pts, prefac, absolute=True)


def _kernel_reduction(nodes, coeffs, b, p1, p0, pts, prefac, absolute):
    npts = pts.shape[0]
    out = np.empty(npts)
    coeffs = coeffs[:, None]
    for start in range(0, npts, _CHUNK):
        block = pts[start : start + _CHUNK]
        dots = nodes @ block.T  # (N, m)
        kv = kernel_values(b, p1, p0, dots)
        if absolute:
            np.abs(kv, out=kv)
        kv *= coeffs
        out[start : start + _CHUNK] = prefac * _kahan_reduce(kv)
    return out


def abs_row_sums(mat):
    """Kahan-compensated sum of |entries| along each row."""
    return _kahan_reduce(np.abs(mat).T)
