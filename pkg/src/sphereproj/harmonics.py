"""Real orthonormal spherical harmonics on S^2.

Basis layout: column r = l*(l+1) + m for 0 <= l <= n, -l <= m <= l, so a
degree-n basis has (n+1)^2 columns.  Conventions: real sin/cos form, no
Condon-Shortley phase, unit L^2(S^2) norm.

Evaluation never forms angles.  The (sin theta)^m factor of the associated
Legendre functions is folded into Re/Im of (x + iy)^m, which are plain
polynomials in the Cartesian coordinates, so columns stay continuous at
the poles.  The remaining polar factors T_lm(z) follow the normalized
forward recurrence

    T_lm = a_lm * (z * T_{l-1,m} - (1/a_{l-1,m}') * T_{l-2,m}),

whose coefficients stay O(1) for every degree used here.
"""

import math
from math import comb

import numpy as np

from .errors import DimensionMismatchError, DomainError

_INV_SQRT_4PI = 0.5 / math.sqrt(math.pi)


def basis_dimension(q: int, n: int) -> int:
    """dim of the spherical polynomials of degree <= n on S^q, exactly.

    Equals (2n+q) Gamma(n+q) / (Gamma(q+1) Gamma(n+1)); evaluated in
    integer arithmetic as C(n+q, q) + C(n+q-1, q).
    """
    if q < 2:
        raise DomainError("sphere dimension must be >= 2, got %r" % (q,))
    if n < 0:
        raise DomainError("degree must be >= 0, got %r" % (n,))
    return comb(n + q, q) + comb(n + q - 1, q)


def harmonic_orders(n: int):
    """Arrays (ells, ems) giving the degree and order of each basis column."""
    ells = np.empty((n + 1) ** 2, dtype=int)
    ems = np.empty((n + 1) ** 2, dtype=int)
    for ell in range(n + 1):
        base = ell * ell
        for m in range(-ell, ell + 1):
            ells[base + ell + m] = ell
            ems[base + ell + m] = m
    return ells, ems


def harmonic_basis_matrix(n: int, points) -> np.ndarray:
    """All basis values at each point: shape (len(points), (n+1)^2).

    `points` must be unit vectors in R^3 (rows); a single point of shape
    (3,) is accepted and yields shape ((n+1)^2,).
    """
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != 3:
        raise DimensionMismatchError(
            "harmonic basis is defined on S^2 only, got points in R^%d" % pts.shape[1]
        )
    x = pts[:, 0]
    y = pts[:, 1]
    z = pts[:, 2]
    d = (n + 1) ** 2
    out = np.empty((pts.shape[0], d))

    # cos_m = Re (x+iy)^m, sin_m = Im (x+iy)^m carry the (sin theta)^m factor
    cos_m = np.ones_like(x)
    sin_m = np.zeros_like(x)
    for m in range(n + 1):
        if m == 0:
            t_prev = np.full_like(x, _INV_SQRT_4PI)
            scale = 1.0
        else:
            cos_m, sin_m = x * cos_m - y * sin_m, x * sin_m + y * cos_m
            t_prev = t_prev_diag * math.sqrt((2.0 * m + 1.0) / (2.0 * m))
            scale = math.sqrt(2.0)
        t_prev_diag = t_prev

        _store(out, m, m, t_prev, cos_m, sin_m, scale)
        if m == n:
            break
        t_cur = math.sqrt(2.0 * m + 3.0) * z * t_prev
        _store(out, m + 1, m, t_cur, cos_m, sin_m, scale)
        for ell in range(m + 2, n + 1):
            a = math.sqrt((4.0 * ell * ell - 1.0) / (ell * ell - m * m))
            c = math.sqrt(
                ((ell - 1.0) ** 2 - m * m) / (4.0 * (ell - 1.0) ** 2 - 1.0)
            )
            t_prev, t_cur = t_cur, a * (z * t_cur - c * t_prev)
            _store(out, ell, m, t_cur, cos_m, sin_m, scale)

    return out[0] if single else out


def _store(out, ell, m, t_vals, cos_m, sin_m, scale):
    base = ell * (ell + 1)
    if m == 0:
        out[:, base] = t_vals
    else:
        out[:, base + m] = scale * t_vals * cos_m
        out[:, base - m] = scale * t_vals * sin_m


def eval_harmonic_basis(n: int, x) -> np.ndarray:
    """Basis values at a single unit point of S^2."""
    return harmonic_basis_matrix(n, x)
