"""Points on the unit sphere S^q, geodesic distances and surface areas.

Points are plain float64 arrays of length q+1 with unit Euclidean norm;
point sets are (N, q+1) arrays.  Everything here is pure and immutable.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, DomainError, RuleFormatError

UNIT_NORM_TOL = 1e-12


def normalize(v) -> np.ndarray:
    """Scale a vector to unit norm.  Rejects zero vectors and dim < 2."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size < 2:
        raise DimensionMismatchError(
            "a sphere point needs at least 2 coordinates, got shape %s" % (v.shape,)
        )
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise DomainError("cannot normalize the zero vector")
    return v / norm


def check_unit_points(points, tol=UNIT_NORM_TOL):
    """Raise DomainError unless every row of `points` has norm 1 within tol."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    norms = np.linalg.norm(points, axis=1)
    bad = np.nonzero(np.abs(norms - 1.0) > tol)[0]
    if bad.size:
        raise DomainError(
            "point %d has norm %.17g, not unit within %g" % (bad[0], norms[bad[0]], tol)
        )
    return points


def geodesic_distance(a, b) -> float:
    """Great-circle angle arccos(a.b) between two unit vectors, in [0, pi].

    The dot product is clamped to [-1, 1] so nearly coincident or antipodal
    inputs cannot produce NaN.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatchError(
            "points of shape %s and %s are incompatible" % (a.shape, b.shape)
        )
    dot = min(1.0, max(-1.0, float(np.dot(a, b))))
    return math.acos(dot)


def surface_area(d: int) -> float:
    """Surface measure of the unit sphere S^d embedded in R^(d+1).

    |S^1| = 2*pi, |S^2| = 4*pi, |S^3| = 2*pi^2, ...
    """
    if d < 1:
        raise DomainError("sphere dimension must be >= 1, got %r" % (d,))
    return 2.0 * math.pi ** ((d + 1) / 2.0) / math.gamma((d + 1) / 2.0)


@dataclass(frozen=True)
class EvaluationSet:
    """A finite, labelled set of unit points used as a sup-norm proxy."""

    points: np.ndarray
    label: str = field(default="unlabelled")

    def __post_init__(self):
        pts = check_unit_points(self.points)
        object.__setattr__(self, "points", pts)
        if pts.shape[0] == 0:
            raise DomainError("evaluation set must be non-empty")

    @property
    def q(self) -> int:
        return self.points.shape[1] - 1

    def __len__(self) -> int:
        return self.points.shape[0]

    def union(self, other: "EvaluationSet") -> "EvaluationSet":
        if other.q != self.q:
            raise DimensionMismatchError("cannot merge sets on S^%d and S^%d" % (self.q, other.q))
        pts = np.vstack([self.points, other.points])
        return EvaluationSet(pts, label="%s+%s" % (self.label, other.label))


def save_points(eval_set: EvaluationSet, path):
    """Write a point set as text: header '# q=<d> N=<count>', one point per line."""
    pts = eval_set.points
    with open(path, "w") as fh:
        fh.write("# q=%d N=%d\n" % (pts.shape[1] - 1, pts.shape[0]))
        for row in pts:
            fh.write(" ".join("%.17g" % c for c in row) + "\n")


def load_points(path, label=None) -> EvaluationSet:
    """Read a point-set file written by save_points."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise RuleFormatError("line 1: missing '# q=<d> N=<count>' header")
    header = dict(
        tok.split("=", 1) for tok in lines[0].lstrip("#").split() if "=" in tok
    )
    try:
        q = int(header["q"])
        count = int(header["N"])
    except (KeyError, ValueError) as exc:
        raise RuleFormatError("line 1: malformed header %r" % lines[0]) from exc
    data = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != q + 1:
            raise RuleFormatError(
                "line %d: expected %d coordinates, got %d" % (lineno, q + 1, len(parts))
            )
        try:
            row = [float(p) for p in parts]
        except ValueError as exc:
            raise RuleFormatError("line %d: unparseable value" % lineno) from exc
        if abs(np.linalg.norm(row) - 1.0) > UNIT_NORM_TOL:
            raise RuleFormatError("line %d: point is not on the unit sphere" % lineno)
        data.append(row)
    if len(data) != count:
        raise RuleFormatError(
            "line 1: header says N=%d but file holds %d points" % (count, len(data))
        )
    return EvaluationSet(np.array(data), label=label or str(path))


def random_unit_points(count, q=2, rng=None) -> np.ndarray:
    """Deterministic pseudo-random points on S^q (Gaussian direction method)."""
    rng = np.random.default_rng(rng)
    v = rng.standard_normal((count, q + 1))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_rotation(dim, rng=None) -> np.ndarray:
    """A random orthogonal matrix with determinant +1 (QR of a Gaussian)."""
    rng = np.random.default_rng(rng)
    mat, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    mat = mat * np.sign(np.diag(r))
    if np.linalg.det(mat) < 0:
        mat[:, 0] = -mat[:, 0]
    return mat
