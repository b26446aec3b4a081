"""Spiral point sets, uniformity statistics, and theorem-hypothesis
certificates for node sets on S^2.

The mesh norm is approximated from a finite evaluation proxy (by default a
spiral set with 16x the points), so the reported value is a lower bound of
the true covering radius.  The separation distance is exact: all-pairs for
moderate sets, a KD-tree for large ones (both agree on overlap sizes).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError, InvariantViolationError
from .geometry import EvaluationSet
from .quadrature import QuadratureRule

_ALL_PAIRS_LIMIT = 20000
_DOT_CHUNK = 4096
_CAP_TOL = 1e-12


def spiral_points(count: int) -> EvaluationSet:
    """Generalized spiral of `count` points from the south to the north pole.

    Heights h_k = -1 + 2(k-1)/(M-1); azimuths accumulate increments
    (3.6/sqrt(M))/sqrt(1-h_k^2) and are fixed to 0 at both poles.  The
    running azimuth is reduced mod 2*pi only after accumulation: the
    increments are pole-sensitive and intermediate reduction would
    reorder the rounding.
    """
    if count < 2:
        raise DomainError("a spiral needs at least 2 points, got %r" % (count,))
    h = -1.0 + 2.0 * np.arange(count) / (count - 1.0)
    h[0] = -1.0
    h[-1] = 1.0
    phi = np.zeros(count)
    coeff = 3.6 / math.sqrt(count)
    acc = 0.0
    for k in range(1, count - 1):
        acc += coeff / math.sqrt(1.0 - h[k] * h[k])
        phi[k] = acc
    phi = np.mod(phi, 2.0 * math.pi)
    phi[0] = 0.0
    phi[-1] = 0.0
    sin_theta = np.sqrt(np.clip(1.0 - h * h, 0.0, None))
    pts = np.column_stack([sin_theta * np.cos(phi), sin_theta * np.sin(phi), h])
    return EvaluationSet(pts, label="spiral-%d" % count)


def _as_points(obj) -> np.ndarray:
    if isinstance(obj, EvaluationSet):
        return obj.points
    if isinstance(obj, QuadratureRule):
        return obj.nodes
    return np.atleast_2d(np.asarray(obj, dtype=float))


def _chord_angle(a, b) -> float:
    # accurate down to 0 (arccos of a dot product is not)
    chord = float(np.linalg.norm(a - b))
    return 2.0 * math.asin(min(1.0, 0.5 * chord))


def mesh_norm(node_set, eval_set) -> float:
    """Covering radius proxy: max over eval points of the distance to the
    nearest node (the max runs over the finite evaluation set)."""
    nodes = _as_points(node_set)
    pts = _as_points(eval_set)
    worst_dot = 2.0
    worst_pair = None
    for start in range(0, pts.shape[0], _DOT_CHUNK):
        block = pts[start : start + _DOT_CHUNK]
        dots = block @ nodes.T
        nearest = np.argmax(dots, axis=1)
        best = dots[np.arange(block.shape[0]), nearest]
        j = int(np.argmin(best))
        if best[j] < worst_dot:
            worst_dot = float(best[j])
            worst_pair = (block[j], nodes[nearest[j]])
    return _chord_angle(*worst_pair)


def separation(node_set) -> float:
    """Minimal pairwise geodesic distance; 0 for duplicated points."""
    nodes = _as_points(node_set)
    n = nodes.shape[0]
    if n < 2:
        raise DomainError("separation needs at least 2 points")
    if n <= _ALL_PAIRS_LIMIT:
        best = -2.0
        pair = None
        for start in range(0, n, _DOT_CHUNK):
            block = nodes[start : start + _DOT_CHUNK]
            dots = block @ nodes.T
            rows = np.arange(start, min(start + _DOT_CHUNK, n))
            dots[rows - start, rows] = -2.0  # mask self-pairs
            flat = int(np.argmax(dots))
            i, j = np.unravel_index(flat, dots.shape)
            if dots[i, j] > best:
                best = float(dots[i, j])
                pair = (block[i], nodes[j])
        return _chord_angle(*pair)
    # chord-distance nearest neighbour, exact for the minimum
    dist, _ = cKDTree(nodes).query(nodes, k=2)
    chord = float(dist[:, 1].min())
    return 2.0 * math.asin(min(1.0, 0.5 * chord))


def cap_count(node_set, centers, radius: float) -> int:
    """Largest number of nodes inside a geodesic cap of the given radius
    centred at any of `centers` (boundary included, 1e-12 slack)."""
    nodes = _as_points(node_set)
    ctrs = _as_points(centers)
    threshold = math.cos(radius) - _CAP_TOL
    worst = 0
    for start in range(0, ctrs.shape[0], _DOT_CHUNK):
        block = ctrs[start : start + _DOT_CHUNK]
        counts = np.count_nonzero(block @ nodes.T >= threshold, axis=1)
        worst = max(worst, int(counts.max()))
    return worst


def cap_count_certificate(node_set, n: int, eval_set) -> int:
    """Max nodes within geodesic radius 1/n of any centre; the node set
    itself is merged into the centres so node-to-node clustering counts."""
    if n < 1:
        raise DomainError("degree must be >= 1, got %r" % (n,))
    nodes = _as_points(node_set)
    centers = np.vstack([_as_points(eval_set), nodes])
    return cap_count(nodes, centers, 1.0 / n)


def weight_ratio_certificate(rule) -> float:
    """Max ratio of consecutive quadrature weights sorted in decreasing order."""
    weights = rule.weights if isinstance(rule, QuadratureRule) else np.asarray(rule, dtype=float)
    if weights.shape[0] < 2:
        raise DomainError("need at least 2 weights")
    if np.any(weights <= 0.0):
        raise InvariantViolationError("weights must be positive")
    ordered = np.sort(weights)[::-1]
    return float(np.max(ordered[:-1] / ordered[1:]))


@dataclass(frozen=True)
class MeshStats:
    """Uniformity numbers of a node set: covering, packing, and their ratio."""

    count: int
    mesh_norm: float
    separation: float
    mesh_ratio: float
    eval_size: int

    def csv_row(self) -> str:
        return "%d,%.17g,%.17g,%.17g,%d" % (
            self.count,
            self.mesh_norm,
            self.separation,
            self.mesh_ratio,
            self.eval_size,
        )


@dataclass(frozen=True)
class CertificateReport:
    """The two theorem hypotheses as numbers: bounded caps at radius 1/n
    (well-separated nodes) and comparable consecutive weights."""

    degree: int
    count: int
    cap_count: int
    weight_ratio: float

    def csv_row(self) -> str:
        return "%d,%d,%d,%.17g" % (self.degree, self.count, self.cap_count, self.weight_ratio)


def mesh_stats(node_set, eval_set) -> MeshStats:
    nodes = _as_points(node_set)
    pts = _as_points(eval_set)
    delta = mesh_norm(nodes, pts)
    gamma = separation(nodes)
    ratio = delta / gamma if gamma > 0.0 else math.inf
    if delta == 0.0:
        ratio = 0.0
    return MeshStats(
        count=nodes.shape[0],
        mesh_norm=delta,
        separation=gamma,
        mesh_ratio=ratio,
        eval_size=pts.shape[0],
    )


def certificate_report(rule: QuadratureRule, n: int, eval_set) -> CertificateReport:
    return CertificateReport(
        degree=n,
        count=len(rule),
        cap_count=cap_count_certificate(rule.nodes, n, eval_set),
        weight_ratio=weight_ratio_certificate(rule),
    )
