"""Ball-model geometry.

Interior points are arrays of Euclidean norm < 1, boundary points are unit
arrays.  Mirrors become spheres (or diametral planes) orthogonal to the unit
sphere; reflections become inversions.  The module also carries the two
mirror-shrinking recurrences used to produce arbitrarily small mirrors near a
prescribed boundary point, and the cone-topology neighborhood predicate.
"""

from dataclasses import dataclass

import numpy as np

from .errors import GeometryError
from .hyperboloid import Hyperplane, PairKind
from .lorentz import TOL_CLASS, TOL_POINT, form

PLANE_EPS = 1e-12       # |last normal coordinate| below which a mirror is a diametral plane
BOUNDARY_EPS = 1e-10    # norm distance to 1 below which a point counts as boundary
_CHORD_EPS = 1e-9


class PointAtInfinity:
    """Tagged value for the point at infinity of the one-point compactification."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"


INF = PointAtInfinity()


def to_ball(x):
    """Stereographic chart (x_1, ..., x_n) / (1 + x_{n+1}) of the upper sheet."""
    x = np.asarray(x, dtype=float)
    return x[..., :-1] / (1.0 + x[..., -1:])


def from_ball(p):
    """Inverse chart; rejects points on or outside the unit sphere."""
    p = np.asarray(p, dtype=float)
    s = (p * p).sum(axis=-1)
    if np.any(s >= 1.0):
        raise GeometryError("point has norm >= 1, not in the open ball")
    last = (1.0 + s) / (1.0 - s)
    return np.concatenate([2.0 * p / (1.0 - s)[..., None], last[..., None]], axis=-1)


def boundary_from_ideal(xi):
    """Unit boundary vector of a light direction (normalized to last coord 1)."""
    xi = np.asarray(xi, dtype=float)
    return xi[..., :-1] / xi[..., -1:]


def ideal_from_boundary(b):
    """Light direction (b, 1) of a unit boundary vector."""
    b = np.asarray(b, dtype=float)
    return np.concatenate([b, np.ones(b.shape[:-1] + (1,))], axis=-1)


def ball_distance(p, q):
    """Hyperbolic distance between interior ball points."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    dd = ((p - q) ** 2).sum(axis=-1)
    den = (1.0 - (p * p).sum(axis=-1)) * (1.0 - (q * q).sum(axis=-1))
    return np.arccosh(np.maximum(1.0 + 2.0 * dd / den, 1.0))


def origin_distance(p):
    """Hyperbolic distance from the ball center, 2 artanh ||p||."""
    r = np.linalg.norm(np.asarray(p, dtype=float), axis=-1)
    return 2.0 * np.arctanh(np.minimum(r, 1.0 - 1e-16))


@dataclass(frozen=True, eq=False)
class GSphere:
    """Sphere (center, radius) or plane (unit normal, offset) in Euclidean n-space.

    Mirrors of the ball model satisfy the orthogonality relation
    ||center||^2 = 1 + radius^2 (sphere case) or offset = 0 (plane case).
    """

    kind: str            # "sphere" | "plane"
    center: np.ndarray   # sphere center, or unit plane normal
    radius: float        # sphere radius, or signed plane offset

    @classmethod
    def sphere(cls, center, radius):
        center = np.asarray(center, dtype=float)
        if radius < 0:
            raise GeometryError("sphere radius must be >= 0")
        return cls("sphere", center, float(radius))

    @classmethod
    def plane(cls, normal, offset=0.0):
        normal = np.asarray(normal, dtype=float)
        nn = np.linalg.norm(normal)
        if nn == 0:
            raise GeometryError("plane normal must be nonzero")
        return cls("plane", normal / nn, float(offset) / nn)

    @property
    def is_sphere(self):
        return self.kind == "sphere"

    def orthogonality_residual(self):
        """|center^2 - 1 - r^2| for spheres, |offset| for planes; 0 for mirrors."""
        if self.is_sphere:
            return abs(float(self.center @ self.center) - 1.0 - self.radius ** 2)
        return abs(self.radius)

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        if self.is_sphere:
            return abs(np.linalg.norm(x - self.center) - self.radius) <= tol
        return abs(x @ self.center - self.radius) <= tol


def hyperplane_to_gsphere(h):
    """Ball-model mirror of a hyperboloid hyperplane."""
    u = h.normal
    w = u[-1]
    if abs(w) < PLANE_EPS:
        return GSphere.plane(u[:-1])
    return GSphere.sphere(u[:-1] / w, 1.0 / abs(w))


def gsphere_to_hyperplane(s):
    """Hyperboloid hyperplane of a mirror; the inverse of hyperplane_to_gsphere."""
    if s.is_sphere:
        if s.radius <= 0:
            raise GeometryError("degenerate sphere")
        u = np.concatenate([s.center, [1.0]]) / s.radius
    else:
        if abs(s.radius) > TOL_POINT:
            raise GeometryError("plane does not pass through the model center")
        u = np.concatenate([s.center, [0.0]])
    return Hyperplane.from_normal(u)


def invert(s, x):
    """Image of a point under the inversion (sphere case) or mirror reflection (plane).

    Total on the one-point compactification: the sphere center maps to INF and
    INF maps to the center; planes fix INF.
    """
    if s.is_sphere:
        if x is INF:
            return s.center.copy()
        x = np.asarray(x, dtype=float)
        d = x - s.center
        dd = float(d @ d)
        if dd == 0.0:
            return INF
        return s.radius ** 2 / dd * d + s.center
    if x is INF:
        return INF
    x = np.asarray(x, dtype=float)
    return x - 2.0 * (x @ s.center - s.radius) * s.center


def invert_points(s, xs):
    """Vectorized invert() for stacked interior points (no INF handling)."""
    xs = np.asarray(xs, dtype=float)
    if s.is_sphere:
        d = xs - s.center
        dd = (d * d).sum(axis=-1, keepdims=True)
        return s.radius ** 2 / dd * d + s.center
    return xs - 2.0 * (xs @ s.center - s.radius)[..., None] * s.center


def invert_gsphere(s, t):
    """Image of the sphere-or-plane t under inversion in s, in closed form."""
    if not s.is_sphere:
        # mirror reflection in a plane
        if t.is_sphere:
            return GSphere.sphere(invert(s, t.center), t.radius)
        p = invert(s, t.center * t.radius)          # mirrored support point
        m = t.center - 2.0 * (t.center @ s.center) * s.center
        return GSphere("plane", m / np.linalg.norm(m), float(p @ m))
    c, r = s.center, s.radius
    if t.is_sphere:
        d, rho = t.center, t.radius
        delta = float((d - c) @ (d - c)) - rho ** 2
        gap = np.linalg.norm(d - c)
        if abs(delta) < 1e-14 * max(1.0, gap ** 2, rho ** 2):
            # t passes through the inversion center: image is a plane
            m = (d - c) / gap
            return GSphere("plane", m, float(c @ m) + r ** 2 / (2.0 * gap))
        f = r ** 2 / delta
        return GSphere.sphere(c + f * (d - c), abs(f) * rho)
    m, o = t.center, t.radius
    h = o - float(c @ m)
    if abs(h) < 1e-14:
        return t
    f = r ** 2 / (2.0 * h)
    return GSphere.sphere(c + f * m, abs(f))


def gsphere_relation(s1, s2, tol=TOL_CLASS):
    """Euclidean trichotomy of two mirrors: crossing, tangent, or disjoint.

    Matches the hyperboloid classification: tangent corresponds to a shared
    ideal point, disjoint (externally or with one ball nested in the other)
    to an ultra-parallel pair.
    """
    if s1.is_sphere and s2.is_sphere:
        gap = np.linalg.norm(s1.center - s2.center)
        outer = s1.radius + s2.radius
        inner = abs(s1.radius - s2.radius)
        if (abs(gap - outer) <= tol * max(1.0, outer)
                or abs(gap - inner) <= tol * max(1.0, inner)):
            return PairKind.PARALLEL
        if inner < gap < outer:
            return PairKind.INTERSECTING
        return PairKind.ULTRA_PARALLEL
    if s1.is_sphere or s2.is_sphere:
        plane, sph = (s1, s2) if s2.is_sphere else (s2, s1)
        h = abs(float(sph.center @ plane.center) - plane.radius)
        if abs(h - sph.radius) <= tol * max(1.0, sph.radius):
            return PairKind.PARALLEL
        return PairKind.INTERSECTING if h < sph.radius else PairKind.ULTRA_PARALLEL
    return PairKind.INTERSECTING   # two distinct diametral planes always cross


def _is_nested(a, b):
    gap = np.linalg.norm(a.center - b.center)
    return gap < abs(a.radius - b.radius)


def orthosphere_through_boundary_circle(v, h):
    """The unique mirror whose boundary trace is the circle {x . v = h} on the unit sphere."""
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    if not 0.0 < h < 1.0:
        raise GeometryError("offset h must lie in (0, 1), got {}".format(h))
    return GSphere.sphere(v / h, np.sqrt(1.0 - h * h) / h)


def _deplane(s1, s2):
    """Replace a plane input by its inversion in the other mirror.

    The inversion is an isometry fixing the second mirror, so tangency points,
    disjointness and the common perpendicular (as a set) are unchanged.
    Returns the possibly transformed pair plus the mirror used (or None).
    """
    if s1.is_sphere and s2.is_sphere:
        return s1, s2, None
    if not s1.is_sphere and not s2.is_sphere:
        raise GeometryError("two diametral planes always cross; pair is not disjoint")
    if not s1.is_sphere:
        return invert_gsphere(s2, s1), s2, s2
    return s1, invert_gsphere(s1, s2), s1


@dataclass(frozen=True, eq=False)
class EuclidPerpendicular:
    """Common perpendicular produced by the tangent-line construction.

    ``endpoints`` are the two ideal endpoints on the unit sphere, ordered so
    that walking along the perpendicular from ``endpoints[0]`` crosses the
    first mirror before the second; ``feet`` are the crossing points with the
    two mirrors, in input order.  ``center``/``radius`` describe the
    supporting circle, or are None for the degenerate straight-chord case.
    """

    endpoints: np.ndarray
    feet: np.ndarray             # (2, n)
    center: np.ndarray | None
    radius: float | None
    tangency_residual: float     # relative defect of r_a^2 + r_Q^2 = |M_a Q|^2
    right_angle_residuals: tuple


def euclid_common_perpendicular(s1, s2):
    """Construct the common perpendicular of two disjoint mirrors in the ball.

    Purely Euclidean: after normalizing the pair so the two balls are
    externally disjoint (reflecting the farther mirror in the nearer one
    preserves the perpendicular as a set), the centers' segment meets the
    unit sphere twice; the circle about the pole of that chord through the
    two crossing points is orthogonal to the unit sphere and to both mirrors.
    """
    if gsphere_relation(s1, s2) is not PairKind.ULTRA_PARALLEL:
        raise GeometryError("mirrors are not ultra-parallel")
    a0, b0, used = _deplane(s1, s2)

    # nested balls: march the farther mirror (smaller radius) toward the
    # model center until the pair is externally disjoint
    a, b = a0, b0
    for _ in range(200):
        if not _is_nested(a, b):
            break
        if a.radius < b.radius:
            a = invert_gsphere(b, a)
        else:
            b = invert_gsphere(a, b)
    else:
        raise GeometryError("could not separate nested mirrors")

    ma, mb = a.center, b.center
    d = mb - ma
    # || ma + t d || = 1
    aa = float(d @ d)
    bb = 2.0 * float(ma @ d)
    cc = float(ma @ ma) - 1.0
    disc = bb * bb - 4.0 * aa * cc
    if disc <= 0:
        raise GeometryError("centers' segment misses the unit sphere")
    t1 = (-bb - np.sqrt(disc)) / (2.0 * aa)
    t2 = (-bb + np.sqrt(disc)) / (2.0 * aa)
    ia = ma + t1 * d
    ib = ma + t2 * d

    x = 0.5 * (ia + ib)
    nx = np.linalg.norm(x)
    if nx < _CHORD_EPS:
        # model center on the segment: the perpendicular is the straight chord
        u = d / np.linalg.norm(d)
        fa = _line_sphere_foot(u, a0)
        fb = _line_sphere_foot(u, b0)
        feet = np.stack([fa, fb])
        endpoints = _order_endpoints_chord(u, ia, ib, fa, fb)
        perp = EuclidPerpendicular(endpoints, feet, None, None, 0.0, (0.0, 0.0))
        return _restore_feet(perp, s1, s2, used)

    q = x / nx ** 2                      # pole of the chord [ia, ib]
    rq = np.sqrt(max(float(q @ q) - 1.0, 0.0))

    fa = _circle_sphere_foot(q, rq, ia, ib, a0.center, a0.radius)
    fb = _circle_sphere_foot(q, rq, ia, ib, b0.center, b0.radius)
    feet = np.stack([fa, fb])
    endpoints = _order_endpoints_arc(q, ia, ib, fa, fb)

    da2 = float((a0.center - q) @ (a0.center - q))
    tangency = abs(a0.radius ** 2 + rq ** 2 - da2) / max(1.0, da2)
    res_a = abs(float((fa - q) @ (fa - a0.center))) / (rq * a0.radius)
    res_b = abs(float((fb - q) @ (fb - b0.center))) / (rq * b0.radius)
    perp = EuclidPerpendicular(endpoints, feet, q, float(rq), tangency, (res_a, res_b))
    return _restore_feet(perp, s1, s2, used)


def _line_sphere_foot(u, s):
    """In-ball crossing of the diameter with direction u with the mirror s."""
    um = float(u @ s.center)
    disc = um * um - (float(s.center @ s.center) - s.radius ** 2)
    if disc < 0:
        raise GeometryError("perpendicular chord misses a mirror")
    roots = (um - np.sqrt(disc), um + np.sqrt(disc))
    t = min(roots, key=abs)
    return t * u


def _circle_sphere_foot(q, rq, ia, ib, m, r):
    """Intersection of the perpendicular circle with a mirror, inside the ball."""
    axis = m - q
    dist = np.linalg.norm(axis)
    axis = axis / dist
    alpha = (dist ** 2 + rq ** 2 - r ** 2) / (2.0 * dist)
    h2 = rq ** 2 - alpha ** 2
    if h2 < 0:
        raise GeometryError("perpendicular circle misses a mirror")
    # in-plane unit vector orthogonal to the axis, from the chord direction
    e = ib - ia
    e = e - (e @ axis) * axis
    e = e / np.linalg.norm(e)
    base = q + alpha * axis
    p1 = base + np.sqrt(h2) * e
    p2 = base - np.sqrt(h2) * e
    return p1 if np.linalg.norm(p1) < np.linalg.norm(p2) else p2


def _order_endpoints_chord(u, ia, ib, fa, fb):
    pts = sorted([ia, ib], key=lambda p: float(p @ u))
    if float(fa @ u) <= float(fb @ u):
        return np.stack(pts)
    return np.stack(pts[::-1])


def _order_endpoints_arc(q, ia, ib, fa, fb):
    def ang(p):
        v = p - q
        return np.arctan2(v[1], v[0]) if len(v) == 2 else 0.0

    if len(ia) != 2:
        # higher dimensions: order by in-plane angle about the pole
        e1 = (ia - q) / np.linalg.norm(ia - q)
        e2 = ib - q - float((ib - q) @ e1) * e1
        e2 = e2 / np.linalg.norm(e2)

        def ang(p):  # noqa: F811
            v = p - q
            return np.arctan2(float(v @ e2), float(v @ e1))

    base = ang(fa)
    d_ia = abs(_wrap_angle(ang(ia) - base))
    d_ib = abs(_wrap_angle(ang(ib) - base))
    if d_ia <= d_ib:
        return np.stack([ia, ib])
    return np.stack([ib, ia])


def _wrap_angle(a):
    return (a + np.pi) % (2.0 * np.pi) - np.pi


def _restore_feet(perp, s1, s2, used):
    """Map feet back onto the original mirrors when a plane input was replaced."""
    if used is None:
        return perp
    feet = perp.feet.copy()
    for k, s in enumerate((s1, s2)):
        if not s.is_sphere:
            feet[k] = invert(used, feet[k])
    return EuclidPerpendicular(perp.endpoints, feet, perp.center, perp.radius,
                               perp.tangency_residual, perp.right_angle_residuals)


def tangency_point(s1, s2):
    """The shared boundary point of two tangent mirrors."""
    a, b, _ = _deplane(s1, s2)
    if gsphere_relation(a, b) is not PairKind.PARALLEL:
        raise GeometryError("mirrors are not tangent")
    u = b.center - a.center
    u = u / np.linalg.norm(u)
    return a.center + a.radius * u


def shrink_parallel(s1, s2, k):
    """Mirror sequence tangent at the shared boundary point, radii halving.

    Starts at s2 and repeatedly maps s1 by the inversion in the latest term.
    Each term passes through the tangency point exactly (it is a fixed point
    of every inversion used), so the spheres' diameters are read off from the
    image of the antipode of the tangency point on s1.
    """
    if k < 1:
        raise GeometryError("sequence length must be >= 1")
    a, b, _ = _deplane(s1, s2)
    if gsphere_relation(a, b) is not PairKind.PARALLEL:
        raise GeometryError("mirrors are not tangent")
    xi = tangency_point(a, b)
    a1 = 2.0 * a.center - xi                      # antipode of xi on the first mirror
    out = [b]
    cur = b
    for _ in range(k - 1):
        img = invert(cur, a1)
        cur = GSphere.sphere(0.5 * (xi + img), 0.5 * np.linalg.norm(img - xi))
        out.append(cur)
    return out


@dataclass(frozen=True, eq=False)
class ShrinkStep:
    sphere: GSphere
    inner: np.ndarray   # crossing of the mirror with the centers' line, inside the ball
    outer: np.ndarray   # its antipode on the mirror, outside the closed ball


def shrink_ultraparallel(s1, s2, k):
    """Mirror sequence marching toward the perpendicular endpoint beyond s2.

    Same recurrence as the tangent case; the tracked points are the two
    crossings of each term with the line through the original centers, whose
    images under the point inversion determine center and radius.
    """
    if k < 1:
        raise GeometryError("sequence length must be >= 1")
    a, b, _ = _deplane(s1, s2)
    if gsphere_relation(a, b) is not PairKind.ULTRA_PARALLEL:
        raise GeometryError("mirrors are not ultra-parallel")
    u = b.center - a.center
    u = u / np.linalg.norm(u)
    x1 = a.center + a.radius * u
    a1 = a.center - a.radius * u
    xc = b.center - b.radius * u
    ac = b.center + b.radius * u
    out = [ShrinkStep(b, xc, ac)]
    cur = b
    for _ in range(k - 1):
        xi_ = invert(cur, x1)
        ai_ = invert(cur, a1)
        cur = GSphere.sphere(0.5 * (xi_ + ai_), 0.5 * np.linalg.norm(xi_ - ai_))
        out.append(ShrinkStep(cur, xi_, ai_))
    return out


@dataclass(frozen=True, eq=False)
class ConeNbhd:
    """Cone-topology basic neighborhood of a boundary point, based at the origin.

    Contains the points x with d(x, 0) > r whose projection to the radius-r
    sphere lies within eps of the ray toward xi.
    """

    xi: np.ndarray   # unit boundary vector
    r: float
    eps: float

    def __post_init__(self):
        if self.r <= 0 or self.eps <= 0:
            raise GeometryError("cone neighborhood needs r > 0 and eps > 0")
        object.__setattr__(self, "xi", np.asarray(self.xi, dtype=float))

    @property
    def anchor(self):
        """The point c(r) on the ray at hyperbolic distance r."""
        return np.tanh(self.r / 2.0) * self.xi


def nbhd_contains(nbhd, x):
    """Evaluate the two defining inequalities for one point (interior or boundary)."""
    x = np.asarray(x, dtype=float)
    nx = np.linalg.norm(x)
    boundary = abs(nx - 1.0) <= BOUNDARY_EPS
    if not boundary and origin_distance(x) <= nbhd.r:
        return False
    if nx == 0.0:
        return False
    proj = np.tanh(nbhd.r / 2.0) * (x / nx)
    return bool(ball_distance(proj, nbhd.anchor) < nbhd.eps)


def nbhd_contains_batch(nbhd, pts):
    """Vectorized nbhd_contains over an (m, n) stack of ball/boundary points."""
    pts = np.asarray(pts, dtype=float)
    nx = np.linalg.norm(pts, axis=-1)
    boundary = np.abs(nx - 1.0) <= BOUNDARY_EPS
    ok_far = boundary | (2.0 * np.arctanh(np.minimum(nx, 1.0 - 1e-16)) > nbhd.r)
    safe = np.where(nx > 0, nx, 1.0)
    proj = np.tanh(nbhd.r / 2.0) * pts / safe[..., None]
    near = ball_distance(proj, nbhd.anchor) < nbhd.eps
    return ok_far & near & (nx > 0)


# ---------------------------------------------------------------------------
# planar (n = 2) arc helpers shared by sampling and rendering

def disk_arc(p, q):
    """Supporting circle of the geodesic through two ball/boundary points (n = 2).

    Returns ("chord", p, q) when the points are collinear with the center,
    else ("arc", center, radius, p, q).
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    det = p[0] * q[1] - p[1] * q[0]
    scale = max(1.0, np.linalg.norm(p) * np.linalg.norm(q))
    if abs(det) < 1e-12 * scale:
        return ("chord", p, q)
    rhs = np.array([(1.0 + p @ p) / 2.0, (1.0 + q @ q) / 2.0])
    center = np.linalg.solve(np.stack([p, q]), rhs)
    return ("arc", center, float(np.linalg.norm(p - center)), p, q)


def sample_disk_arc(p, q, count):
    """count+1 points along the geodesic arc from p to q, endpoints included."""
    seg = disk_arc(p, q)
    ts = np.linspace(0.0, 1.0, count + 1)
    if seg[0] == "chord":
        return p + ts[:, None] * (q - p)
    _, center, radius, _, _ = seg
    a0 = np.arctan2(*(p - center)[::-1])
    a1 = np.arctan2(*(q - center)[::-1])
    delta = (a1 - a0 + np.pi) % (2.0 * np.pi) - np.pi   # minor arc
    ang = a0 + ts * delta
    return center + radius * np.stack([np.cos(ang), np.sin(ang)], axis=-1)


def sample_unit_circle_arc(a0, a1, count):
    """count+1 boundary points along the circle arc from angle a0 to a1 (increasing)."""
    ang = np.linspace(a0, a1, count + 1)
    return np.stack([np.cos(ang), np.sin(ang)], axis=-1)
