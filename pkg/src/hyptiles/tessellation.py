"""Tiles, boundary-point catalogs, and the desk-scale boundary experiments.

The geometry modules are dimension-generic; the experiments here fix the
plane (rank-3 groups acting on the disk), where tiles have drawable outlines
and boundary points reduce to angles.
"""

import math
from dataclasses import dataclass

import numpy as np

from .coxeter import (
    _PointTable,
    enumerate_elements,
    enumerate_reflections,
    reduce_word,
)
from .errors import GeometryError, SearchInconclusive
from .hyperboloid import Hyperplane
from .lorentz import TOL_CLASS, form
from .poincare import (
    ConeNbhd,
    boundary_from_ideal,
    hyperplane_to_gsphere,
    nbhd_contains_batch,
    sample_disk_arc,
    sample_unit_circle_arc,
    to_ball,
)
from .reflength import reflection_length

__all__ = [
    "Tile", "CatalogPoint", "BoundaryCatalog", "TileSearchResult",
    "DensityReport", "SpectrumReport", "make_tile", "generate_tiles",
    "tile_sample_points", "tile_in_nbhd", "tile_meets_nbhd",
    "build_boundary_catalog", "find_tile_with_reflection_length",
    "density_scan", "length_values_near", "neighborhood_length_spectrum",
    "wall_boundary_points",
]


@dataclass(frozen=True, eq=False)
class Tile:
    """Image of the fundamental chamber under one group element (n = 2).

    ``segments`` trace the closed outline: ("geo", p, q) pieces are geodesic
    arcs between ball/boundary points, ("circle", a0, a1) pieces run along
    the unit circle between angles a0 < a1 (limit arcs of unbounded tiles).
    """

    element: object
    l_s: int
    l_r: int
    vertices: list
    segments: list
    limit_arcs: list


def wall_boundary_points(normal):
    """The two boundary points of a wall geodesic in the disk (n = 2)."""
    a, b, c = normal
    rho2 = a * a + b * b
    foot = (c / rho2) * np.array([a, b])
    side = np.array([-b, a]) / rho2
    return foot + side, foot - side


def _wall_behind_arc(normal):
    """Angular interval (a0, a1), a0 < a1 <= a0 + 2 pi, of boundary directions
    strictly behind the wall (negative side of its oriented normal)."""
    e1, e2 = wall_boundary_points(normal)
    t1 = math.atan2(e1[1], e1[0])
    t2 = math.atan2(e2[1], e2[0])
    lo, hi = min(t1, t2), max(t1, t2)
    mid = 0.5 * (lo + hi)
    inside = np.array([np.cos(mid), np.sin(mid), 1.0])
    if float(form(normal, inside)) < 0:
        return lo, hi
    return hi, lo + 2.0 * math.pi


def _polytope_tile_data(group, element):
    verts = []
    for v in group.vertices:
        w = element.matrix @ v
        if abs(float(form(w, w)) + 1.0) < 1e-6 * max(1.0, w[-1] ** 2):
            verts.append(to_ball(w))
        else:
            verts.append(boundary_from_ideal(w))
    segments = [("geo", verts[i], verts[(i + 1) % len(verts)])
                for i in range(len(verts))]
    return verts, segments, []


def _free_tile_data(group, element):
    two_pi = 2.0 * math.pi
    normals = [element.matrix @ u for u in group.normals]
    raw = [_wall_behind_arc(nu) for nu in normals]
    arcs = sorted(((a0 % two_pi, a1 - a0) for a0, a1 in raw))
    # measure angles from the first arc's start so no interval wraps
    origin = arcs[0][0]
    arcs = [((s - origin) % two_pi, w) for s, w in arcs]
    arcs.sort()
    segments = []
    limit = []
    for k, (s, w) in enumerate(arcs):
        a0, a1 = s + origin, s + w + origin
        p = np.array([np.cos(a0), np.sin(a0)])
        q = np.array([np.cos(a1), np.sin(a1)])
        segments.append(("geo", p, q))
        b0 = s + w
        b1 = arcs[k + 1][0] if k + 1 < len(arcs) else two_pi
        if b1 > b0 + 1e-12:
            segments.append(("circle", b0 + origin, b1 + origin))
            limit.append((b0 + origin, b1 + origin))
    return [], segments, limit


def make_tile(group, element, l_r=None):
    """Tile of one element, with outline data for the planar case."""
    if group.dim != 2:
        raise GeometryError("tile outlines are implemented for rank-3 groups only")
    if l_r is None:
        l_r = reflection_length(group, element)
    if group.is_polytope:
        verts, segments, limit = _polytope_tile_data(group, element)
    else:
        verts, segments, limit = _free_tile_data(group, element)
    return Tile(element, len(element.word), int(l_r), verts, segments, limit)


def generate_tiles(group, depth, max_count=500_000):
    """One annotated tile per element of word length <= depth."""
    return [make_tile(group, el) for el in enumerate_elements(group, depth, max_count)]


def tile_sample_points(tile, per_edge=32):
    """Outline samples (vertices included); boundary pieces yield unit vectors."""
    chunks = []
    for seg in tile.segments:
        if seg[0] == "geo":
            chunks.append(sample_disk_arc(seg[1], seg[2], per_edge))
        else:
            chunks.append(sample_unit_circle_arc(seg[1], seg[2], per_edge))
    if tile.vertices:
        chunks.append(np.stack(tile.vertices))
    return np.concatenate(chunks, axis=0)


def tile_in_nbhd(tile, nbhd, samples=32):
    """Sampled containment check: vertices plus per-edge outline samples.

    A sampling approximation (the neighborhood is not convex); refining the
    sample count can only flip the answer from contained to not contained.
    """
    pts = tile_sample_points(tile, samples)
    return bool(nbhd_contains_batch(nbhd, pts).all())


def tile_meets_nbhd(tile, nbhd, samples=32):
    """Sampled intersection check along the tile outline."""
    pts = tile_sample_points(tile, samples)
    return bool(nbhd_contains_batch(nbhd, pts).any())


@dataclass(frozen=True, eq=False)
class CatalogPoint:
    kind: str                 # "tangency" | "perpendicular"
    point: np.ndarray         # light direction, last coordinate 1
    boundary: np.ndarray      # unit vector in the disk closure
    angle: float
    witnesses: tuple          # the two Reflections whose mirrors produce it


@dataclass(frozen=True, eq=False)
class BoundaryCatalog:
    depth: int
    tangency_points: list
    perpendicular_points: list

    def all_points(self):
        return self.tangency_points + self.perpendicular_points


def _pair_form_values(normals):
    j = np.ones(normals.shape[1])
    j[-1] = -1.0
    return normals @ (normals * j).T


def build_boundary_catalog(group, depth, max_count=500_000):
    """Shared ideal points of tangent mirror pairs and perpendicular endpoints
    of ultra-parallel mirror pairs, over all reflections of the given depth.

    Points are deduplicated at the point-coincidence tolerance and sorted by
    boundary angle; each keeps the first witnessing pair.
    """
    refls = enumerate_reflections(group, depth, max_count)
    normals = np.stack([r.hyperplane.normal for r in refls])
    c = _pair_form_values(normals)
    tangencies = {}
    perps = {}
    n = len(refls)
    for i in range(n):
        for j in range(i + 1, n):
            cij = c[i, j]
            if abs(abs(cij) - 1.0) <= TOL_CLASS:
                xi = _tangency_direction(normals[i], normals[j])
                if xi is None:
                    continue
                _catalog_insert(tangencies, "tangency", xi, (refls[i], refls[j]))
            elif abs(cij) > 1.0:
                for xi in _perp_endpoints(normals[i], normals[j], cij):
                    _catalog_insert(perps, "perpendicular", xi, (refls[i], refls[j]))
    tang = sorted(tangencies.values(), key=lambda p: p.angle)
    perp = sorted(perps.values(), key=lambda p: p.angle)
    return BoundaryCatalog(depth, tang, perp)


def _tangency_direction(u1, u2, tol=1e-6):
    # kernel direction of the form on the intersection of the two wall planes
    j = np.ones(u1.shape[0])
    j[-1] = -1.0
    a = np.stack([u1 * j, u2 * j])
    _, _, vt = np.linalg.svd(a)
    basis = vt[2:].T
    b = basis.T @ (basis * j[:, None])
    w, vecs = np.linalg.eigh(b)
    k = int(np.argmin(np.abs(w)))
    d = basis @ vecs[:, k]
    if abs(d[-1]) < tol:
        return None
    d = d / d[-1]
    if d[-1] < 0:
        return None
    return d


def _perp_endpoints(u1, u2, c):
    v = u2 - c * u1
    p = v / np.sqrt(c * c - 1.0)
    if p[-1] < 0:
        p = -p
    out = []
    for e in (p + u1, p - u1):
        out.append(e / e[-1])
    return out


def _catalog_insert(store, kind, xi, witnesses):
    b = xi[:-1]
    key = tuple(np.round(b / 1e-7).astype(np.int64))
    if key in store:
        return
    angle = math.atan2(b[1], b[0]) % (2.0 * math.pi) if b.shape[0] == 2 else 0.0
    store[key] = CatalogPoint(kind, xi, b / np.linalg.norm(b), angle, witnesses)


@dataclass(frozen=True, eq=False)
class TileSearchResult:
    tile: Tile
    mirror_word: tuple
    mirror_normal: np.ndarray
    mirror_steps: int
    tiles_examined: int


def _hyperplane_in_nbhd(normal, nbhd, samples):
    e1, e2 = wall_boundary_points(normal)
    pts = sample_disk_arc(e1, e2, max(2 * samples, 8))
    return bool(nbhd_contains_batch(nbhd, pts).all())


def find_tile_with_reflection_length(group, point, nbhd, k, *, mirror_cap=200,
                                     bfs_cap=16, samples=32, max_tiles=20000):
    """Find a tile of prescribed reflection length k inside a neighborhood of
    a catalogued boundary point.

    Strategy: alternating products of the witness pair give a family of
    mirrors marching toward the boundary point; once one lies inside the
    neighborhood, every tile beyond it is inside too (the far half-space of a
    contained mirror is contained: radial geodesics cross the mirror first).
    A breadth-first walk over adjacent tiles on the far side then finds the
    prescribed reflection length.  Caps exhausting raise SearchInconclusive.

    The marching family advances one mirror position per step (word growth is
    linear), keeping the found tiles' words short enough for the deletion
    length computation to verify them; the default cap covers the tangent
    case, whose mirrors approach the boundary point like 1/steps.
    """
    if k < 1:
        raise GeometryError(
            "k must be >= 1: the fundamental tile contains the basepoint and "
            "never fits in a boundary neighborhood")
    ra, rb = point.witnesses
    base, other = rb, ra
    if point.kind == "perpendicular":
        # converge to the requested endpoint: the marching family accumulates
        # beyond the mirror whose Euclidean ball contains it
        sb = hyperplane_to_gsphere(rb.hyperplane)
        if not (sb.is_sphere
                and np.linalg.norm(point.boundary - sb.center) < sb.radius):
            base, other = ra, rb

    # alternating family: the mirror with prefix letters base, other, base, ...
    # of length j and middle letter matching the parity of j sits j steps
    # beyond the base mirror, marching toward the requested boundary point
    pair = (base, other)
    carry = np.eye(group.rank)
    prefix_words = []
    mirror_steps = None
    for j in range(mirror_cap + 1):
        mid = pair[j % 2]
        cand = carry @ mid.hyperplane.normal
        if float(form(cand, group.basepoint)) < 0:
            cand = -cand
        if _hyperplane_in_nbhd(cand, nbhd, samples):
            mirror_steps = j
            mirror_normal = cand
            flat = tuple(x for w in prefix_words for x in w)
            mirror_word = flat + mid.element.word + flat[::-1]
            break
        carry = carry @ mid.element.matrix
        prefix_words.append(mid.element.word)
    if mirror_steps is None:
        raise SearchInconclusive(
            "no mirror of the marching family inside the neighborhood "
            "within {} steps".format(mirror_cap))

    rho = reduce_word(group, mirror_word)

    def far(x):
        return float(form(mirror_normal, x)) < 0

    if not far(rho.point):
        raise GeometryError("mirror tile landed on the basepoint side")

    seen = _PointTable(group.rank)
    seen.insert(rho.point)
    queue = [(rho, 0)]
    examined = 0
    head = 0
    while head < len(queue):
        el, depth = queue[head]
        head += 1
        if len(el.word) % 2 == k % 2:
            examined += 1
            if examined > max_tiles:
                raise SearchInconclusive(
                    "tile budget {} exhausted before finding length {}".format(
                        max_tiles, k))
            l_r = reflection_length(group, el)
            if l_r == k:
                tile = make_tile(group, el, l_r=l_r)
                if tile_in_nbhd(tile, nbhd, samples):
                    return TileSearchResult(tile, rho.word, mirror_normal,
                                            mirror_steps, examined)
        if depth < bfs_cap:
            for s in range(group.rank):
                m = el.matrix @ group.generator_matrices[s]
                x = m[:, -1]
                if not far(x) or seen.find(x) is not None:
                    continue
                seen.insert(x)
                child = reduce_word(group, el.word + (s,))
                queue.append((child, depth + 1))
    raise SearchInconclusive(
        "breadth-first cap {} exhausted before finding length {}".format(bfs_cap, k))


@dataclass(frozen=True, eq=False)
class DensityReport:
    depth: int
    directions: np.ndarray
    gaps: np.ndarray
    max_gap: float
    point_count: int
    polytope_hypothesis: bool


def density_scan(group, depth, directions):
    """Angular gap from uniformly spaced boundary directions to the catalog.

    The density statement assumes a polytope chamber; for other groups the
    scan still runs but the report flags the violated hypothesis.
    """
    if directions < 1:
        raise GeometryError("need at least one direction")
    catalog = build_boundary_catalog(group, depth)
    angles = np.array(sorted(p.angle for p in catalog.all_points()))
    dirs = np.linspace(0.0, 2.0 * math.pi, directions, endpoint=False)
    if angles.size == 0:
        gaps = np.full(directions, math.pi)
    else:
        pos = np.searchsorted(angles, dirs)
        lo = angles[(pos - 1) % angles.size]
        hi = angles[pos % angles.size]
        gap_lo = np.abs(dirs - lo)
        gap_hi = np.abs(hi - dirs)
        gap_lo = np.minimum(gap_lo, 2.0 * math.pi - gap_lo)
        gap_hi = np.minimum(gap_hi, 2.0 * math.pi - gap_hi)
        gaps = np.minimum(gap_lo, gap_hi)
    return DensityReport(depth, dirs, gaps, float(gaps.max()),
                         len(catalog.all_points()), group.is_polytope)


def length_values_near(group, boundary, r, eps, depth, samples=32):
    """Sorted reflection lengths of the generated tiles meeting the
    neighborhood of a boundary direction."""
    nbhd = ConeNbhd(np.asarray(boundary, dtype=float), r, eps)
    values = set()
    for tile in generate_tiles(group, depth):
        if tile_meets_nbhd(tile, nbhd, samples):
            values.add(tile.l_r)
    return sorted(values)


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    element_word: tuple
    boundary: np.ndarray
    r: float
    depth: int
    rows: list            # (eps, sorted reflection-length values)


def neighborhood_length_spectrum(group, element, eps_list, *, r=2.0, depth=8,
                                 samples=32):
    """Reflection lengths of tiles meeting shrinking neighborhoods of a
    boundary point interior to the element's tile.

    The probe point is the midpoint of the widest limit arc of the tile;
    the tile itself always meets the neighborhood, so its own length is a
    member of every row.  For a group whose tiles have no limit arcs the
    probe point falls back to an ideal vertex of the tile.
    """
    tile = make_tile(group, element)
    if tile.limit_arcs:
        a0, a1 = max(tile.limit_arcs, key=lambda ab: ab[1] - ab[0])
        mid = 0.5 * (a0 + a1)
        boundary = np.array([np.cos(mid), np.sin(mid)])
    else:
        ideal = [v for v in tile.vertices if abs(np.linalg.norm(v) - 1.0) < 1e-9]
        if not ideal:
            raise GeometryError("tile has no ideal boundary to probe")
        boundary = ideal[0] / np.linalg.norm(ideal[0])
    rows = []
    for eps in eps_list:
        rows.append((float(eps),
                     length_values_near(group, boundary, r, eps, depth, samples)))
    return SpectrumReport(element.word, boundary, float(r), depth, rows)
