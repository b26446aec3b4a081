"""Positive-weight quadrature rules on the sphere with declared exactness.

The workhorse is the tensor-product rule combining an (n+1)-point
Gauss-Legendre rule in the polar direction with a 2(n+1)-point uniform
azimuthal rule; it has N = 2(n+1)^2 nodes and degree of exactness 2n+1.

`verify_exactness` checks a rule against an independent closed-form
oracle for monomial integrals over S^2; the oracle itself is
cross-validated numerically in the test suite before anything relies
on it.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigurationError,
    DimensionMismatchError,
    DomainError,
    EvaluationError,
    InvariantViolationError,
    RuleFormatError,
)
from .geometry import UNIT_NORM_TOL, surface_area
from .harmonics import basis_dimension
from .orthopoly import gauss_legendre_rule

WEIGHT_SUM_RTOL = 1e-10


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes, positive weights and declared degree of exactness on S^q.

    The declared exactness is stored, never inferred: rules loaded from
    files may be exact to a degree the verifier cannot reproduce.
    """

    q: int
    nodes: np.ndarray
    weights: np.ndarray
    exactness: int

    def __post_init__(self):
        nodes = np.ascontiguousarray(np.atleast_2d(self.nodes), dtype=float)
        weights = np.ascontiguousarray(self.weights, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.shape[1] != self.q + 1:
            raise InvariantViolationError(
                "nodes have %d coordinates but q=%d" % (nodes.shape[1], self.q)
            )
        if nodes.shape[0] != weights.shape[0]:
            raise InvariantViolationError("node and weight counts differ")
        if np.any(weights <= 0.0):
            raise InvariantViolationError("all quadrature weights must be positive")
        norms = np.linalg.norm(nodes, axis=1)
        if np.any(np.abs(norms - 1.0) > UNIT_NORM_TOL):
            raise InvariantViolationError("quadrature nodes must lie on the unit sphere")
        area = surface_area(self.q)
        total = math.fsum(weights)
        if abs(total - area) > WEIGHT_SUM_RTOL * area:
            raise InvariantViolationError(
                "weights sum to %.17g, expected |S^%d| = %.17g" % (total, self.q, area)
            )
        # a positive rule exact on P_{2k} supports at least dim P_k nodes
        lower = basis_dimension(self.q, self.exactness // 2)
        if nodes.shape[0] < lower:
            raise InvariantViolationError(
                "N=%d nodes cannot be exact to degree %d (needs >= %d)"
                % (nodes.shape[0], self.exactness, lower)
            )

    def __len__(self):
        return self.nodes.shape[0]


def tensor_gl_rule(n: int) -> QuadratureRule:
    """Tensor-product Gauss-Legendre rule on S^2 for projection degree n.

    N = 2(n+1)^2 nodes at azimuths k*pi/(n+1), k = 0..2n+1, and polar
    angles arccos z_j with z_j the (n+1)-point Gauss-Legendre nodes;
    the node at (j, k) carries weight pi*nu_j/(n+1).  Exactness 2n+1.
    Ordering: j outer (from the north pole down), k inner.
    """
    if n < 0:
        raise DomainError("projection degree must be >= 0, got %r" % (n,))
    glr = gauss_legendre_rule(n + 1)
    z = glr.nodes[::-1]  # descending: north pole first
    nu = glr.weights[::-1]
    sin_theta = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    k = np.arange(2 * n + 2)
    phi = k * math.pi / (n + 1)
    cos_phi = np.cos(phi)
    sin_phi = np.sin(phi)
    nodes = np.empty((2 * (n + 1) ** 2, 3))
    nodes[:, 0] = np.outer(sin_theta, cos_phi).reshape(-1)
    nodes[:, 1] = np.outer(sin_theta, sin_phi).reshape(-1)
    nodes[:, 2] = np.repeat(z, 2 * n + 2)
    weights = np.repeat(math.pi * nu / (n + 1), 2 * n + 2)
    return QuadratureRule(q=2, nodes=nodes, weights=weights, exactness=2 * n + 1)


def _node_values(f, nodes) -> np.ndarray:
    """Values of f at the nodes; f may be a callable or a value vector."""
    if callable(f):
        try:
            vals = np.asarray(f(nodes), dtype=float)
        except Exception:
            vals = None
        if vals is None or vals.shape != (nodes.shape[0],):
            vals = np.array([float(f(p)) for p in nodes])
    else:
        vals = np.asarray(f, dtype=float)
        if vals.shape != (nodes.shape[0],):
            raise DimensionMismatchError(
                "expected %d node values, got shape %s" % (nodes.shape[0], vals.shape)
            )
    bad = np.nonzero(~np.isfinite(vals))[0]
    if bad.size:
        raise EvaluationError("non-finite function value at node %d" % bad[0])
    return vals


def integrate(rule: QuadratureRule, f) -> float:
    """Apply the rule: sum of lambda_i * f(node_i), compensated summation."""
    vals = _node_values(f, rule.nodes)
    return math.fsum(rule.weights * vals)


def monomial_sphere_integral(a: int, b: int, c: int) -> float:
    """Exact integral of x^a y^b z^c over S^2 (surface measure).

    Zero when any exponent is odd; otherwise
    2 * Gamma((a+1)/2) Gamma((b+1)/2) Gamma((c+1)/2) / Gamma((a+b+c+3)/2).
    """
    if min(a, b, c) < 0:
        raise DomainError("exponents must be nonnegative")
    if (a % 2) or (b % 2) or (c % 2):
        return 0.0
    return (
        2.0
        * math.gamma((a + 1) / 2.0)
        * math.gamma((b + 1) / 2.0)
        * math.gamma((c + 1) / 2.0)
        / math.gamma((a + b + c + 3) / 2.0)
    )


def verify_exactness(rule: QuadratureRule) -> float:
    """Max |rule - oracle| over all monomials of total degree <= exactness."""
    if rule.q != 2:
        raise ConfigurationError("the monomial oracle covers S^2 only")
    deg = rule.exactness
    n_nodes = len(rule)
    # cumulative coordinate powers: pows[c][k] = coord^k at every node
    pows = []
    for col in range(3):
        table = np.empty((deg + 1, n_nodes))
        table[0] = 1.0
        for k in range(1, deg + 1):
            table[k] = table[k - 1] * rule.nodes[:, col]
        pows.append(table)
    worst = 0.0
    for a in range(deg + 1):
        for b in range(deg + 1 - a):
            xy = pows[0][a] * pows[1][b]
            for c in range(deg + 1 - a - b):
                approx = float(rule.weights @ (xy * pows[2][c]))
                err = abs(approx - monomial_sphere_integral(a, b, c))
                if err > worst:
                    worst = err
    return worst


def save_rule(rule: QuadratureRule, path):
    """Write '# q=<d> N=<count> exactness=<e>' then one 'x y z w' per line."""
    with open(path, "w") as fh:
        fh.write("# q=%d N=%d exactness=%d\n" % (rule.q, len(rule), rule.exactness))
        for node, w in zip(rule.nodes, rule.weights):
            fh.write(" ".join("%.17g" % c for c in node) + " %.17g\n" % w)


def load_rule(path) -> QuadratureRule:
    """Read a rule file written by save_rule; errors name the bad line."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise RuleFormatError("line 1: missing '# q=.. N=.. exactness=..' header")
    header = dict(
        tok.split("=", 1) for tok in lines[0].lstrip("#").split() if "=" in tok
    )
    try:
        q = int(header["q"])
        count = int(header["N"])
        exactness = int(header["exactness"])
    except (KeyError, ValueError) as exc:
        raise RuleFormatError("line 1: malformed header %r" % lines[0]) from exc
    nodes = []
    weights = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != q + 2:
            raise RuleFormatError(
                "line %d: expected %d fields, got %d" % (lineno, q + 2, len(parts))
            )
        try:
            vals = [float(p) for p in parts]
        except ValueError as exc:
            raise RuleFormatError("line %d: unparseable value" % lineno) from exc
        node, w = vals[:-1], vals[-1]
        if w <= 0.0:
            raise RuleFormatError("line %d: non-positive weight %.17g" % (lineno, w))
        if abs(np.linalg.norm(node) - 1.0) > UNIT_NORM_TOL:
            raise RuleFormatError("line %d: node is not on the unit sphere" % lineno)
        nodes.append(node)
        weights.append(w)
    if len(nodes) != count:
        raise RuleFormatError(
            "line 1: header says N=%d but file holds %d nodes" % (count, len(nodes))
        )
    return QuadratureRule(q=q, nodes=np.array(nodes), weights=np.array(weights), exactness=exactness)
