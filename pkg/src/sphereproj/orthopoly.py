"""Orthogonal polynomials on [-1, 1]: Legendre, Gauss-Legendre rules, and
the reproducing kernel for the weight w(t) = (1 - t^2)^(q/2 - 1).

The kernel of degree n is K_n(t) = sum_{k<=n} p_k(t) p_k(1), where {p_k}
is orthonormal with respect to w.  With the kernel in hand, the projection
with minimal uniform norm has Lebesgue constant

    integral_{-1}^{1} |K_n(t)| w(t) dt,

which `fourier_lebesgue_constant` evaluates by panel-refined Gauss
quadrature (the absolute value kills spectral accuracy of a single rule).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import DomainError, NumericalError

T_DOMAIN_TOL = 1e-12

_NEWTON_TOL = 1e-15
_NEWTON_MAX_ITER = 100


def legendre_eval(k, t):
    """Legendre polynomial P_k(t), normalized so P_k(1) = 1.

    Accepts scalar or array t; rejects |t| > 1 + 1e-12.
    """
    if k < 0:
        raise DomainError("degree must be >= 0, got %r" % (k,))
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0 + T_DOMAIN_TOL):
        raise DomainError("argument outside [-1, 1]")
    t = np.clip(t, -1.0, 1.0)
    pkm1 = np.zeros_like(t)
    pk = np.ones_like(t)
    for j in range(1, k + 1):
        pkm1, pk = pk, ((2 * j - 1) * t * pk - (j - 1) * pkm1) / j
    return pk if pk.ndim else float(pk)


def _legendre_and_derivative(m, t):
    # P_m and P_m' evaluated together (both needed by the Newton step)
    pkm1 = np.zeros_like(t)
    pk = np.ones_like(t)
    for j in range(1, m + 1):
        pkm1, pk = pk, ((2 * j - 1) * t * pk - (j - 1) * pkm1) / j
    dpk = m * (t * pk - pkm1) / (t * t - 1.0)
    return pk, dpk


@dataclass(frozen=True)
class GaussLegendreRule:
    """Nodes and weights of an m-point Gauss-Legendre rule on [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return self.nodes.shape[0]

    def integrate(self, values) -> float:
        return float(self.weights @ np.asarray(values, dtype=float))


def gauss_legendre_rule(m: int) -> GaussLegendreRule:
    """Gauss-Legendre nodes (ascending) and weights by Newton iteration.

    Initial guesses cos(pi (4j - 1) / (4m + 2)); the iteration stops when
    the largest update falls below 1e-15 and raises NumericalError if it
    has not converged after 100 sweeps.
    """
    if m < 1:
        raise DomainError("rule size must be >= 1, got %r" % (m,))
    if m == 1:
        return GaussLegendreRule(np.zeros(1), np.full(1, 2.0))
    j = np.arange(1, m + 1, dtype=float)
    x = np.cos(math.pi * (4.0 * j - 1.0) / (4.0 * m + 2.0))
    for _ in range(_NEWTON_MAX_ITER):
        p, dp = _legendre_and_derivative(m, x)
        dx = p / dp
        x -= dx
        if np.max(np.abs(dx)) < _NEWTON_TOL:
            break
    else:
        raise NumericalError(
            "Gauss-Legendre Newton iteration stalled at m=%d (last update %.3g)"
            % (m, float(np.max(np.abs(dx))))
        )
    x = np.sort(x)
    # exact symmetry about 0 (odd moments then vanish identically)
    x = 0.5 * (x - x[::-1])
    _, dp = _legendre_and_derivative(m, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    w = 0.5 * (w + w[::-1])
    return GaussLegendreRule(x, w)


def _recurrence(q: int, n: int):
    """Orthonormal three-term recurrence data for w(t) = (1-t^2)^(q/2-1).

    Returns (b, p1, p0): b[k] is the off-diagonal coefficient (b[0] = 0
    sentinel), p1[k] = p_k(1), p0 = p_0.  The b_k come from the closed-form
    symmetric-Jacobi coefficients; the boundary column from running the
    recurrence at t = 1.
    """
    alpha = 0.5 * q - 1.0
    b = np.zeros(n + 1)
    if n >= 1:
        k = np.arange(1, n + 1, dtype=float)
        b[1:] = np.sqrt(
            k * (k + 2.0 * alpha) / ((2.0 * k + 2.0 * alpha + 1.0) * (2.0 * k + 2.0 * alpha - 1.0))
        )
    mu0 = 2.0 ** (2.0 * alpha + 1.0) * math.gamma(alpha + 1.0) ** 2 / math.gamma(2.0 * alpha + 2.0)
    p0 = 1.0 / math.sqrt(mu0)
    p1 = np.empty(n + 1)
    p1[0] = p0
    prev = 0.0
    cur = p0
    for k in range(1, n + 1):
        nxt = (cur - b[k - 1] * prev) / b[k]
        prev, cur = cur, nxt
        p1[k] = cur
    return b, p1, p0


class DarbouxKernel:
    """Degree-n reproducing kernel K_n(t) for the weight (1-t^2)^(q/2-1).

    Immutable after construction; evaluation is pure and thread-safe.
    """

    def __init__(self, q: int, degree: int):
        if q < 2:
            raise DomainError("kernel weight needs q >= 2, got %r" % (q,))
        if degree < 0:
            raise DomainError("degree must be >= 0, got %r" % (degree,))
        self.q = int(q)
        self.degree = int(degree)
        self.recurrence_b, self.boundary_values, self.p0 = _recurrence(q, degree)

    def eval(self, t):
        """K_n(t) for scalar or array t; |t| may exceed 1 by at most 1e-12."""
        arr = np.asarray(t, dtype=float)
        if np.any(np.abs(arr) > 1.0 + T_DOMAIN_TOL):
            raise DomainError("kernel argument outside [-1, 1]")
        flat = np.ascontiguousarray(arr.reshape(-1))
        vals = backend.kernel_values(self.recurrence_b, self.boundary_values, self.p0, flat)
        vals = np.asarray(vals).reshape(arr.shape)
        return vals if arr.ndim else float(vals)

    def peak(self) -> float:
        """K_n(1) = sup of |K_n| on [-1, 1]."""
        return float(np.dot(self.boundary_values, self.boundary_values))

    def weight(self, t):
        """The orthogonality weight w(t) = (1-t^2)^(q/2-1)."""
        t = np.asarray(t, dtype=float)
        base = np.clip(1.0 - t * t, 0.0, None)
        return base ** (0.5 * self.q - 1.0)


def darboux_kernel_build(q: int, degree: int) -> DarbouxKernel:
    return DarbouxKernel(q, degree)


def fourier_lebesgue_constant(q, n, rtol=1e-8, max_refinements=16) -> float:
    """Uniform norm of the degree-n orthogonal projection on S^q.

    By rotational invariance this is the one-dimensional integral of
    |K_n| * w over [-1, 1].  Composite 16-point Gauss panels are doubled
    until two successive estimates agree to `rtol` relative; exceeding
    `max_refinements` raises NumericalError carrying both last estimates.
    """
    kern = DarbouxKernel(q, n)
    panel_rule = gauss_legendre_rule(16)
    panels = max(8, n)
    prev = None
    for _ in range(max_refinements):
        edges = np.linspace(-1.0, 1.0, panels + 1)
        half = 0.5 * (edges[1] - edges[0])
        centers = 0.5 * (edges[:-1] + edges[1:])
        pts = (centers[:, None] + half * panel_rule.nodes[None, :]).reshape(-1)
        contrib = np.abs(kern.eval(pts)) * kern.weight(pts)
        contrib *= half * np.tile(panel_rule.weights, panels)
        value = math.fsum(contrib)
        if prev is not None and abs(value - prev) <= rtol * abs(value):
            return value
        prev = value
        panels *= 2
    raise NumericalError(
        "panel refinement for the |K_%d| integral (q=%d) did not settle: "
        "last estimates %.17g and %.17g" % (n, q, prev, value)
    )
