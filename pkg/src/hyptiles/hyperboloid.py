"""Geometry on the upper hyperboloid sheet.

Points are vectors v with form(v, v) = -1 and positive last coordinate,
mirrors are unit spacelike normals, ideal points are light-cone directions
normalized to last coordinate 1.  All operations are pure functions.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError
from .lorentz import TOL_CLASS, TOL_FORM, TOL_POINT, form

__all__ = [
    "Hyperplane", "GeodesicLine", "PairKind", "PairClassification",
    "point", "ideal_point", "distance", "reflect", "reflection_matrix",
    "classify_pair", "common_ideal_point", "common_perpendicular",
    "perpendicular_feet", "hyperplane_distance", "geodesic_endpoints",
    "geodesic_through", "ray_to_ideal", "right_angle_residual",
]


def point(coords):
    """Validate and return a point of the upper sheet."""
    v = np.asarray(coords, dtype=float)
    if v[-1] <= 0:
        raise GeometryError("point not on the upper sheet (last coordinate <= 0)")
    q = form(v, v)
    if abs(q + 1.0) > TOL_POINT * max(1.0, v[-1] ** 2):
        raise GeometryError("form(v, v) = {} is not -1".format(q))
    return v


def ideal_point(direction):
    """Normalize a light-cone direction to last coordinate 1."""
    d = np.asarray(direction, dtype=float)
    if abs(d[-1]) < TOL_POINT * np.abs(d).max():
        raise GeometryError("degenerate light direction")
    d = d / d[-1]
    if abs(form(d, d)) > TOL_POINT * max(1.0, float(np.abs(d).max()) ** 2):
        raise GeometryError("direction is not on the light cone")
    return d


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """Oriented geodesic hyperplane, stored as its unit spacelike normal."""

    normal: np.ndarray

    @classmethod
    def from_normal(cls, v):
        v = np.asarray(v, dtype=float)
        q = form(v, v)
        if q <= TOL_FORM:
            raise GeometryError("hyperplane normal must be spacelike")
        return cls(v / np.sqrt(q))

    @property
    def dim(self):
        return self.normal.shape[0] - 1


@dataclass(frozen=True, eq=False)
class GeodesicLine:
    """Geodesic line s -> p cosh s + t sinh s with form-orthonormal (p, t)."""

    point: np.ndarray    # timelike unit, upper sheet
    tangent: np.ndarray  # spacelike unit, form-orthogonal to point

    def at(self, s):
        s = np.asarray(s, dtype=float)
        return (np.cosh(s)[..., None] * self.point
                + np.sinh(s)[..., None] * self.tangent)

    @property
    def basis(self):
        return self.point, self.tangent


class PairKind(enum.Enum):
    INTERSECTING = "intersecting"
    PARALLEL = "parallel"
    ULTRA_PARALLEL = "ultra-parallel"


@dataclass(frozen=True)
class PairClassification:
    kind: PairKind
    form_value: float
    angle: float | None = field(default=None)


def distance(x, y):
    """Hyperbolic distance arccosh(-form(x, y))."""
    c = -form(x, y)
    if c < 1.0 - TOL_POINT * max(1.0, abs(c)):
        raise GeometryError("-form(x, y) = {} < 1: invalid points".format(c))
    return float(np.arccosh(max(c, 1.0)))


def reflect(plane, x):
    """Reflection x - 2 form(u, x) u across the hyperplane with normal u.

    Works on points, normals and light directions alike (it is linear), and
    broadcasts over stacked vectors.
    """
    u = plane.normal
    x = np.asarray(x, dtype=float)
    return x - 2.0 * form(u, x)[..., None] * u


def reflection_matrix(plane):
    """Matrix I - 2 u (Ju)^T of the reflection across the hyperplane."""
    u = plane.normal
    ju = u.copy()
    ju[-1] = -ju[-1]
    return np.eye(u.shape[0]) - 2.0 * np.outer(u, ju)


def classify_pair(h1, h2, tol=TOL_CLASS):
    """Classify a pair of distinct hyperplanes by the form value of their normals.

    |form| < 1 means the mirrors cross (returned with the dihedral angle
    arccos|form|), |form| = 1 within tol means they share exactly one ideal
    point, |form| > 1 means they are ultra-parallel.
    """
    u1, u2 = h1.normal, h2.normal
    if min(np.abs(u1 - u2).max(), np.abs(u1 + u2).max()) < TOL_FORM * max(1.0, np.abs(u1).max()):
        raise GeometryError("equal hyperplanes")
    c = float(form(u1, u2))
    if abs(abs(c) - 1.0) <= tol:
        return PairClassification(PairKind.PARALLEL, c)
    if abs(c) < 1.0:
        angle = float(np.arccos(np.clip(abs(c), 0.0, 1.0)))
        return PairClassification(PairKind.INTERSECTING, c, angle)
    return PairClassification(PairKind.ULTRA_PARALLEL, c)


def common_ideal_point(h1, h2):
    """The single light direction shared by two tangent hyperplanes.

    Found as the kernel direction of the form restricted to the intersection
    of the two normal-orthogonal subspaces.
    """
    cls = classify_pair(h1, h2)
    if cls.kind is not PairKind.PARALLEL:
        raise GeometryError("pair is {}, not parallel".format(cls.kind.value))
    u1, u2 = h1.normal, h2.normal
    dim = u1.shape[0]
    j = np.ones(dim)
    j[-1] = -1.0
    a = np.stack([u1 * j, u2 * j])
    _, _, vt = np.linalg.svd(a)
    basis = vt[2:].T                      # (dim, dim-2) basis of V1 cap V2
    b = basis.T @ (basis * j[:, None])    # restricted form
    w, vecs = np.linalg.eigh(b)
    k = int(np.argmin(np.abs(w)))
    d = basis @ vecs[:, k]
    if d[-1] < 0:
        d = -d
    return ideal_point(d)


def _perp_frame(h1, h2):
    u1, u2 = h1.normal, h2.normal
    c = float(form(u1, u2))
    if abs(c) <= 1.0 + TOL_CLASS:
        raise GeometryError("pair is not ultra-parallel")
    v = u2 - c * u1
    p = v / np.sqrt(c * c - 1.0)
    if p[-1] < 0:
        p = -p
    return p, u1, c


def common_perpendicular(h1, h2):
    """The unique geodesic meeting both ultra-parallel hyperplanes at right angles.

    It is the trace of the plane spanned by the two normals; the returned
    parameterization is based at the foot on h1 with tangent along h1's normal.
    """
    p, t, _ = _perp_frame(h1, h2)
    return GeodesicLine(p, t)


def perpendicular_feet(h1, h2):
    """Feet of the common perpendicular on h1 and h2 (in that order)."""
    p, t, c = _perp_frame(h1, h2)
    # form(gamma(s), u2) = 0 with gamma(s) = p cosh s + t sinh s
    s = np.arctanh(-form(p, h2.normal) / c)
    foot2 = np.cosh(s) * p + np.sinh(s) * t
    return p, foot2


def hyperplane_distance(h1, h2):
    """Distance between the perpendicular feet; zero unless ultra-parallel."""
    cls = classify_pair(h1, h2)
    if cls.kind is not PairKind.ULTRA_PARALLEL:
        return 0.0
    f1, f2 = perpendicular_feet(h1, h2)
    return distance(f1, f2)


def geodesic_endpoints(line):
    """The two light directions of a geodesic, as (gamma(+inf), gamma(-inf))."""
    p, t = line.point, line.tangent
    return ideal_point(p + t), ideal_point(p - t)


def geodesic_through(x, y):
    """Geodesic through two distinct points, based at x and aimed at y."""
    d = distance(x, y)
    if d < TOL_POINT:
        raise GeometryError("points coincide")
    t = (y - np.cosh(d) * x) / np.sinh(d)
    return GeodesicLine(x, t)


def ray_to_ideal(x, xi):
    """Geodesic ray from the point x toward the ideal point xi."""
    c = -form(x, xi)
    if c <= 0:
        raise GeometryError("invalid ray data")
    t = xi / c - x
    return GeodesicLine(x, t)


def right_angle_residual(plane, line):
    """How far a geodesic is from meeting a hyperplane at a right angle.

    The right-angle criterion is membership of the hyperplane's normal in the
    geodesic's spanning plane; the residual is the relative Euclidean distance
    of the normal from that plane (0 for an exact perpendicular).
    """
    u = plane.normal
    basis = np.stack([line.point, line.tangent], axis=1)
    coef, *_ = np.linalg.lstsq(basis, u, rcond=None)
    return float(np.linalg.norm(u - basis @ coef) / np.linalg.norm(u))
