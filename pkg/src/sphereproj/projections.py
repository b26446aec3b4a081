"""Discrete polynomial projections on the sphere and their Lebesgue machinery.

Two operators share one interface (`tag`, `degree`, `node_count`,
`apply(f, points)`, `lebesgue_function(points)`):

* hyperinterpolation - kernel-weighted quadrature sums; needs a rule whose
  exactness is at least twice the projection degree;
* discrete least squares - the projection orthogonal under the unweighted
  sum over nodes, built from a QR factorization of the node-value matrix
  of the harmonic basis (normal equations would square the condition
  number and ruin the node-kernel bound around degree 20).

`lebesgue_constant_estimate` maximises an operator's Lebesgue function
over a finite evaluation set, so it always reports a lower bound on the
true operator norm.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from . import backend
from .errors import (
    ConfigurationError,
    DegenerateNodeSetError,
    DimensionMismatchError,
    EvaluationError,
)
from .geometry import EvaluationSet, surface_area
from .harmonics import basis_dimension, harmonic_basis_matrix
from .orthopoly import DarbouxKernel, fourier_lebesgue_constant
from .quadrature import QuadratureRule, _node_values

_RANK_TOL = 1e-10


def _as_point_matrix(points):
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    return np.atleast_2d(pts), single


class HyperinterpolationOperator:
    """Discrete projection L_n f = (1/|S^(q-1)|) sum_i w_i f(node_i) K_n(node_i . x)."""

    tag = "hyper"

    def __init__(self, rule: QuadratureRule, degree: int):
        if rule.exactness < 2 * degree:
            raise ConfigurationError(
                "rule exactness %d < 2n = %d: the operator would not be a projection"
                % (rule.exactness, 2 * degree)
            )
        self.rule = rule
        self.degree = int(degree)
        self.kernel = DarbouxKernel(rule.q, degree)
        self.prefactor = 1.0 / surface_area(rule.q - 1)

    @property
    def q(self) -> int:
        return self.rule.q

    @property
    def node_count(self) -> int:
        return len(self.rule)

    def apply(self, f, points):
        """Value of the projection of f at one point or a batch of points."""
        fvals = _node_values(f, self.rule.nodes)
        coeffs = np.ascontiguousarray(self.rule.weights * fvals)
        pts, single = _as_point_matrix(points)
        kern = self.kernel
        out = backend.map_point_chunks(
            lambda block: backend.weighted_kernel_sums(
                self.rule.nodes, coeffs, kern.recurrence_b, kern.boundary_values,
                kern.p0, block, self.prefactor,
            ),
            pts,
        )
        return float(out[0]) if single else out

    def lebesgue_function(self, points):
        """(1/|S^(q-1)|) sum_i w_i |K_n(node_i . x)| at each x; >= 1 everywhere."""
        pts, single = _as_point_matrix(points)
        kern = self.kernel
        out = backend.map_point_chunks(
            lambda block: backend.weighted_abs_kernel_sums(
                self.rule.nodes, self.rule.weights, kern.recurrence_b,
                kern.boundary_values, kern.p0, block, self.prefactor,
            ),
            pts,
        )
        return float(out[0]) if single else out


class DiscreteOrthonormalBasis:
    """Basis of degree <= n polynomials orthonormal under the plain node sum.

    `node_values[i, r]` holds the r-th basis function at node i (the Q
    factor), `harmonic_coeffs[:, r]` its expansion in the harmonic basis
    (the inverse triangular factor), so the projection kernel is

        H_n(x, y) = sum_r I_r(x) I_r(y).
    """

    def __init__(self, degree, nodes, node_values, harmonic_coeffs):
        self.degree = int(degree)
        self.nodes = nodes
        self.node_values = node_values
        self.harmonic_coeffs = harmonic_coeffs

    @property
    def dimension(self) -> int:
        return self.node_values.shape[1]

    @property
    def node_count(self) -> int:
        return self.nodes.shape[0]

    def evaluate_basis(self, points) -> np.ndarray:
        """Matrix of I_r values at the given points, shape (M, d_n)."""
        pts, single = _as_point_matrix(points)
        vals = harmonic_basis_matrix(self.degree, pts) @ self.harmonic_coeffs
        return vals[0] if single else vals

    def kernel_between(self, points) -> np.ndarray:
        """H_n(x, node_j) for each x in points: shape (M, N)."""
        pts, single = _as_point_matrix(points)
        mat = self.evaluate_basis(pts) @ self.node_values.T
        return mat[0] if single else mat

    def node_kernel_matrix(self) -> np.ndarray:
        """H_n at all node pairs (Gram of the Q rows)."""
        return self.node_values @ self.node_values.T


def build_ls_basis(nodes, degree: int) -> DiscreteOrthonormalBasis:
    """Orthonormalize the harmonic basis under the discrete node product.

    Uses a reduced QR of the N x d_n node-value matrix; a diagonal entry of
    the triangular factor below 1e-10 of the largest signals nodes that
    cannot resolve degree n (e.g. all on one great circle).
    """
    nodes = np.ascontiguousarray(np.atleast_2d(nodes), dtype=float)
    d = basis_dimension(2, degree)
    if nodes.shape[0] < d:
        raise DimensionMismatchError(
            "need at least %d nodes for degree %d, got %d" % (d, degree, nodes.shape[0])
        )
    y = harmonic_basis_matrix(degree, nodes)
    q_factor, r_factor = np.linalg.qr(y)
    # fix the sign freedom: positive triangular diagonal
    signs = np.sign(np.diag(r_factor))
    signs[signs == 0.0] = 1.0
    q_factor = q_factor * signs
    r_factor = signs[:, None] * r_factor
    diag = np.abs(np.diag(r_factor))
    if diag.min() < _RANK_TOL * diag.max():
        raise DegenerateNodeSetError(
            "node set is numerically rank-deficient for degree %d "
            "(triangular diagonal ratio %.3g)" % (degree, diag.min() / diag.max())
        )
    coeffs = solve_triangular(r_factor, np.eye(d))
    return DiscreteOrthonormalBasis(degree, nodes, np.ascontiguousarray(q_factor), coeffs)


class LeastSquaresOperator:
    """Least-squares projection onto degree <= n via the discrete kernel."""

    tag = "LS"

    def __init__(self, basis: DiscreteOrthonormalBasis):
        self.basis = basis
        self.degree = basis.degree

    @property
    def q(self) -> int:
        return 2

    @property
    def node_count(self) -> int:
        return self.basis.node_count

    def apply(self, f, points):
        """Least-squares fit of the node data, evaluated at points.

        Minimizes the sum of squared nodal residuals over all polynomials
        of degree <= n, i.e. returns sum_i f(node_i) H_n(x, node_i).
        """
        fvals = _node_values(f, self.basis.nodes)
        coeffs = self.basis.node_values.T @ fvals
        pts, single = _as_point_matrix(points)
        out = backend.map_point_chunks(
            lambda block: self.basis.evaluate_basis(block) @ coeffs, pts
        )
        return float(out[0]) if single else out

    def lebesgue_function(self, points):
        """sum_j |H_n(x, node_j)| at each x."""
        pts, single = _as_point_matrix(points)
        node_vals_t = self.basis.node_values.T

        def block_sums(block):
            mat = self.basis.evaluate_basis(block) @ node_vals_t
            return backend.abs_row_sums(np.ascontiguousarray(mat))

        out = backend.map_point_chunks(block_sums, pts, chunk=2048)
        return float(out[0]) if single else out


def ls_project(basis: DiscreteOrthonormalBasis, f, points):
    return LeastSquaresOperator(basis).apply(f, points)


def ls_lebesgue_function(basis: DiscreteOrthonormalBasis, points):
    return LeastSquaresOperator(basis).lebesgue_function(points)


class FourierProjectionOperator:
    """Reference operator: the orthogonal projection, whose Lebesgue function
    is constant over the sphere by rotational invariance."""

    tag = "fourier"

    def __init__(self, q: int, degree: int):
        self.q = int(q)
        self.degree = int(degree)
        self.node_count = 0
        self._constant = fourier_lebesgue_constant(q, degree)

    def lebesgue_function(self, points):
        pts, single = _as_point_matrix(points)
        return self._constant if single else np.full(pts.shape[0], self._constant)


@dataclass(frozen=True)
class LebesgueReport:
    """Lower bound on an operator norm obtained from a finite point set."""

    operator: str
    degree: int
    node_count: int
    eval_label: str
    eval_size: int
    estimate: float
    argmax: np.ndarray

    def csv_row(self) -> str:
        coords = ",".join("%.17g" % c for c in self.argmax)
        return "%s,%d,%d,%s,%d,%.17g,%s" % (
            self.operator,
            self.degree,
            self.node_count,
            self.eval_label,
            self.eval_size,
            self.estimate,
            coords,
        )


def lebesgue_constant_estimate(operator, eval_set: EvaluationSet) -> LebesgueReport:
    """Max of the operator's Lebesgue function over the evaluation set.

    Monotone under evaluation-set union; ties resolve to the lowest index.
    """
    op_q = getattr(operator, "q", eval_set.q)
    if op_q != eval_set.q:
        raise DimensionMismatchError(
            "operator lives on S^%d but the evaluation set on S^%d" % (op_q, eval_set.q)
        )
    vals = np.atleast_1d(operator.lebesgue_function(eval_set.points))
    best = int(np.argmax(vals))
    return LebesgueReport(
        operator=operator.tag,
        degree=operator.degree,
        node_count=operator.node_count,
        eval_label=eval_set.label,
        eval_size=len(eval_set),
        estimate=float(vals[best]),
        argmax=eval_set.points[best].copy(),
    )


def uniform_error_estimate(operator, f, eval_set: EvaluationSet) -> float:
    """Max |f - (operator f)| over the evaluation set."""
    approx = operator.apply(f, eval_set.points)
    exact = _node_values(f, eval_set.points)
    return float(np.max(np.abs(exact - approx)))
