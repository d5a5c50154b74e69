"""Discrete reflection groups from labeled Coxeter matrices.

A rank-m spec with admissible labels is realized by m unit spacelike normals
in R^{m-1,1} whose Gram matrix encodes the labels: -cos(pi/m_ij) for finite
labels, -1 for tangent walls, -cosh(t) for ultra-parallel walls at distance t.
The realization is normalized so the interior basepoint of the fundamental
chamber is (0, ..., 0, 1), i.e. the center of the ball model.

Element identity is geometric: the orbit of the basepoint separates distinct
elements (the chamber is a strict fundamental domain), so elements are
deduplicated by snapping the moved basepoint to a spatial hash.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, ResourceLimitError
from .hyperboloid import Hyperplane, classify_pair, hyperplane_distance, PairKind
from .lorentz import TOL_ELEM, TOL_FORM, TOL_POINT, form, realize_gram

SNAP = 10.0 * TOL_POINT   # orbit points closer than this are the same element


@dataclass(frozen=True)
class CoxeterSpec:
    """Rank, symmetric label matrix (math.inf for infinite labels) and, for
    each infinite label, the geometric tag: None for tangent walls or the
    prescribed distance t for ultra-parallel walls."""

    rank: int
    labels: tuple
    ultra: dict

    @classmethod
    def from_labels(cls, rank, entries, ultra=None):
        """entries: {(i, j): label} over 0-based unordered pairs, label int >= 2 or inf."""
        ultra = dict(ultra or {})
        labels = [[1.0] * rank for _ in range(rank)]
        seen = set()
        for (i, j), label in entries.items():
            if not 0 <= i < rank and 0 <= j < rank or i == j:
                raise GeometryError("bad generator pair ({}, {})".format(i, j))
            key = (min(i, j), max(i, j))
            if key in seen:
                raise GeometryError("duplicate label for pair {}".format(key))
            seen.add(key)
            if label != math.inf and (int(label) != label or label < 2):
                raise GeometryError("label for {} must be an integer >= 2 or inf".format(key))
            labels[key[0]][key[1]] = labels[key[1]][key[0]] = float(label)
        missing = [(i, j) for i in range(rank) for j in range(i + 1, rank)
                   if (i, j) not in seen]
        if missing:
            raise GeometryError("missing labels for pairs {}".format(missing))
        for key, t in ultra.items():
            key = (min(key), max(key))
            if labels[key[0]][key[1]] != math.inf:
                raise GeometryError("ultra tag on finite label at {}".format(key))
            if not t > 0:
                raise GeometryError("ultra distance must be positive at {}".format(key))
        norm_ultra = {(min(i, j), max(i, j)): float(t) for (i, j), t in ultra.items()}
        return cls(rank, tuple(tuple(row) for row in labels), norm_ultra)

    def label(self, i, j):
        return self.labels[i][j]

    def gram(self):
        g = np.eye(self.rank)
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                m = self.labels[i][j]
                if m == math.inf:
                    t = self.ultra.get((i, j))
                    g[i, j] = g[j, i] = -1.0 if t is None else -math.cosh(t)
                else:
                    g[i, j] = g[j, i] = -math.cos(math.pi / m)
        return g


@dataclass(frozen=True, eq=False)
class Element:
    """Group element: canonical reduced word plus its isometry matrix.

    The canonical word is the lexicographically least reduced word, obtained
    by always stripping the least-index left descent.  ``point`` caches the
    image of the basepoint, the element's identity key.
    """

    word: tuple
    matrix: np.ndarray
    point: np.ndarray

    @property
    def length(self):
        return len(self.word)

    def __repr__(self):
        name = ".".join("s{}".format(i + 1) for i in self.word) or "e"
        return "<Element {}>".format(name)


@dataclass(frozen=True, eq=False)
class Reflection:
    """A conjugate w s w^-1 of a generator, together with its mirror."""

    element: Element
    hyperplane: Hyperplane


class _PointTable:
    """Spatial hash with guaranteed lookups for points separated by > SNAP.

    Every inserted point is registered in its own grid cell and all adjacent
    cells, so a query within SNAP of an inserted point always finds it with a
    single cell lookup plus a distance check.
    """

    def __init__(self, dim, cell=4.0 * SNAP):
        self.cell = cell
        self.dim = dim
        self._cells = {}
        self._points = []
        self.min_separation = np.inf
        from itertools import product
        self._offsets = list(product((-1, 0, 1), repeat=dim))

    def __len__(self):
        return len(self._points)

    def _key(self, p):
        return tuple(int(c) for c in np.floor(p / self.cell))

    def find(self, p):
        bucket = self._cells.get(self._key(p))
        if not bucket:
            return None
        for idx in bucket:
            d = np.abs(self._points[idx] - p).max()
            if d <= SNAP:
                return idx
            self.min_separation = min(self.min_separation, d)
        return None

    def insert(self, p):
        idx = len(self._points)
        self._points.append(np.asarray(p, dtype=float))
        base = self._key(p)
        for off in self._offsets:
            key = tuple(b + o for b, o in zip(base, off))
            self._cells.setdefault(key, []).append(idx)
        return idx


def _translation_to_origin(p):
    """Form-preserving map sending the timelike unit p to (0, ..., 0, 1).

    Composition of the form-reflections through p + e_last and through p;
    fixes the orthogonal complement of their span pointwise.
    """
    dim = p.shape[0]
    e = np.zeros(dim)
    e[-1] = 1.0
    sigma = p + e

    def point_reflection(v):
        jv = v.copy()
        jv[-1] = -jv[-1]
        return np.eye(dim) - 2.0 * np.outer(v, jv) / form(v, v)

    return point_reflection(sigma) @ point_reflection(p)


class ReflectionGroup:
    """A realized hyperbolic reflection group with simplex fundamental chamber."""

    def __init__(self, spec, normals, vertices, vertex_kinds):
        self.spec = spec
        self.rank = spec.rank
        self.dim = spec.rank - 1                  # dimension n of the hyperbolic space
        self.normals = normals                    # (rank, rank) rows
        self.walls = [Hyperplane(u) for u in normals]
        self.generator_matrices = [self._refl_matrix(u) for u in normals]
        self.basepoint = np.zeros(spec.rank)
        self.basepoint[-1] = 1.0
        self.vertices = vertices                  # list of arrays or None (hyperideal)
        self.vertex_kinds = vertex_kinds          # "finite" | "ideal" | "hyperideal"
        self.is_polytope = all(k != "hyperideal" for k in vertex_kinds)
        self._caches = {}

    @staticmethod
    def _refl_matrix(u):
        ju = u.copy()
        ju[-1] = -ju[-1]
        return np.eye(u.shape[0]) - 2.0 * np.outer(u, ju)

    @property
    def identity(self):
        m = np.eye(self.rank)
        return Element((), m, self.basepoint.copy())

    def generator(self, i):
        m = self.generator_matrices[i]
        return Element((i,), m.copy(), m[:, -1].copy())

    def word_matrix(self, word):
        m = np.eye(self.rank)
        for i in word:
            m = m @ self.generator_matrices[i]
        return m

    def element_from_word(self, word):
        """Canonical element of an arbitrary word (see reduce_word)."""
        return reduce_word(self, word)

    def wall_margin(self, i, x):
        """Signed side of wall i: positive on the chamber side."""
        return float(form(self.normals[i], x))


def build_group(spec):
    """Realize a Coxeter spec as a reflection group acting on H^{rank-1}.

    The Gram matrix of the prescribed dihedral data must have signature
    (rank-1, 1); the normals are then produced by its eigendecomposition,
    the chamber is oriented to contain a timelike direction, and the whole
    configuration is translated so the chamber's equal-margin interior point
    becomes the ball-model center.
    """
    if spec.rank < 3:
        raise GeometryError("hyperbolic realization needs rank >= 3")
    normals = realize_gram(spec.gram())

    j = np.ones(spec.rank)
    j[-1] = -1.0
    rhs = np.ones(spec.rank)
    try:
        p = np.linalg.solve(normals * j, rhs)
    except np.linalg.LinAlgError:
        raise GeometryError("degenerate wall configuration") from None
    q = float(form(p, p))
    if q >= -TOL_FORM:
        raise GeometryError("chamber has no timelike interior direction")
    p = p / np.sqrt(-q)
    if p[-1] < 0:
        p = -p
        normals = -normals
    move = _translation_to_origin(p)
    normals = normals @ move.T

    vertices, kinds = [], []
    for i in range(spec.rank):
        others = np.delete(normals, i, axis=0)
        _, _, vt = np.linalg.svd(others * j)
        z = vt[-1]
        qz = float(form(z, z))
        if qz > TOL_POINT:
            vertices.append(None)
            kinds.append("hyperideal")
            continue
        if z[-1] < 0:
            z = -z
        if float(form(normals[i], z)) <= 0:
            raise GeometryError("chamber vertex on the wrong side of its wall")
        if qz < -TOL_POINT:
            vertices.append(z / np.sqrt(-qz))
            kinds.append("finite")
        else:
            vertices.append(z / z[-1])
            kinds.append("ideal")

    return ReflectionGroup(spec, normals, vertices, kinds)


def is_left_descent(group, s, element):
    """True when generator s shortens the element from the left.

    Geometric criterion: the element moves the basepoint across wall s.
    """
    margin = group.wall_margin(s, element.point)
    if abs(margin) < TOL_POINT:
        raise GeometryError("basepoint on a wall; degenerate configuration")
    return margin < 0


def reduce_word(group, word):
    """Canonical form of a word: repeatedly strip the least-index left descent.

    The stripping walk is the gallery descent from the moved basepoint back
    to the chamber; its length equals the distance in the Cayley graph, and
    always stripping the least descent yields the lexicographically least
    reduced word.
    """
    m = group.word_matrix(word)
    x = m[:, -1].copy()
    out = []
    cur = m.copy()
    for _ in range(len(word) + 1):
        margins = [group.wall_margin(i, cur[:, -1]) for i in range(group.rank)]
        neg = [i for i, v in enumerate(margins) if v < -TOL_POINT]
        if not neg:
            break
        s = neg[0]
        out.append(s)
        cur = group.generator_matrices[s] @ cur
    else:
        raise GeometryError("descent walk failed to terminate; element not discrete?")
    if np.abs(cur[:, -1] - group.basepoint).max() > SNAP:
        raise GeometryError("descent walk did not reach the chamber")
    return Element(tuple(out), m, x)


def element_equal(a, b, tol=TOL_ELEM):
    """Entrywise matrix comparison, scale-aware for far-from-identity products."""
    scale = max(1.0, float(np.abs(a.matrix).max()), float(np.abs(b.matrix).max()))
    return bool(np.abs(a.matrix - b.matrix).max() <= tol * scale)


def enumerate_elements(group, max_length, max_count=500_000):
    """All elements of word length <= max_length, breadth-first.

    Output is deterministic and canonically ordered: lengths increase, and
    within a length words are lexicographic.  Deduplication keys on the moved
    basepoint; the minimal separation ever observed between distinct orbit
    points is recorded on the group for the discreteness sanity check.
    Results are cached and extended incrementally.
    """
    cache = group._caches.get("enum")
    if cache is None:
        table = _PointTable(group.rank)
        ident = group.identity
        table.insert(ident.point)
        cache = {"table": table, "elements": [ident], "frontier": [ident],
                 "depth": 0, "prefix": {0: 1}}
        group._caches["enum"] = cache
    while cache["depth"] < max_length and cache["frontier"]:
        table, elements = cache["table"], cache["elements"]
        nxt = []
        for el in cache["frontier"]:
            for s in range(group.rank):
                m = el.matrix @ group.generator_matrices[s]
                x = m[:, -1]
                if table.find(x) is not None:
                    continue
                if len(elements) >= max_count:
                    raise ResourceLimitError(
                        "element budget {} exceeded at length {}".format(
                            max_count, len(el.word) + 1))
                table.insert(x)
                child = Element(el.word + (s,), m, x.copy())
                elements.append(child)
                nxt.append(child)
        cache["frontier"] = nxt
        cache["depth"] += 1
        cache["prefix"][cache["depth"]] = len(elements)
    group.orbit_min_separation = cache["table"].min_separation
    depth = min(max_length, cache["depth"])
    return cache["elements"][:cache["prefix"][depth]]


def enumerate_reflections(group, max_length, max_count=500_000):
    """Distinct reflections w s w^-1 over elements w with length <= max_length.

    Deduplicated by their action (two reflections agree iff they move the
    basepoint identically); ordered by first appearance in the element scan.
    Mirror normals are oriented toward the chamber.  Cached incrementally.
    """
    elements = enumerate_elements(group, max_length, max_count)
    cache = group._caches.get("refl")
    if cache is None:
        # count_at[k] = number of distinct reflections seen after scanning the
        # first k elements; elements form a stable BFS prefix, so any depth's
        # answer is a prefix of the growing list
        cache = {"table": _PointTable(group.rank), "out": [], "count_at": [0]}
        group._caches["refl"] = cache
    table, out, count_at = cache["table"], cache["out"], cache["count_at"]
    for el in elements[len(count_at) - 1:]:
        inv = _form_inverse(el.matrix)
        for s in range(group.rank):
            m = el.matrix @ group.generator_matrices[s] @ inv
            x = m[:, -1]
            if table.find(x) is not None:
                continue
            table.insert(x)
            normal = el.matrix @ group.normals[s]
            if float(form(normal, group.basepoint)) < 0:
                normal = -normal
            word = el.word + (s,) + el.word[::-1]
            out.append(Reflection(reduce_word(group, word), Hyperplane(normal)))
        count_at.append(len(out))
    return out[:count_at[len(elements)]]


def _form_inverse(m):
    j = np.ones(m.shape[0])
    j[-1] = -1.0
    return (j[:, None] * m.T) * j[None, :]


def product_conjugacy_check(group, r1, r2, bound):
    """Bounded search for a witness r1 r2 = w (s_i s_j)^k w^-1 with m_ij finite.

    A witness certifies that the two mirrors cross (the product is conjugate
    into a finite dihedral subgroup).  Scans elements of length <= bound,
    ordered generator pairs with finite label and exponents 1 <= k <= bound;
    returns (w, i, j, k) or None when nothing is found within the bound (a
    bounded semi-decision, not a proof of absence).
    """
    if element_equal(r1.element, r2.element):
        raise GeometryError("reflections must be distinct")
    target = r1.element.matrix @ r2.element.matrix
    powers = {}
    for i in range(group.rank):
        for j_ in range(group.rank):
            if i == j_ or group.spec.label(i, j_) == math.inf:
                continue
            d = group.generator_matrices[i] @ group.generator_matrices[j_]
            acc = np.eye(group.rank)
            for k in range(1, bound + 1):
                acc = acc @ d
                powers[(i, j_, k)] = acc.copy()
    for w in enumerate_elements(group, bound):
        inv = _form_inverse(w.matrix)
        conj = inv @ target @ w.matrix
        scale = max(1.0, float(np.abs(conj).max()))
        for (i, j_, k), p in powers.items():
            if np.abs(conj - p).max() <= TOL_ELEM * max(scale, float(np.abs(p).max())):
                return (w, i, j_, k)
    return None


def find_ultraparallel_partner(group, refl, eps, max_length):
    """First catalogued reflection whose mirror is ultra-parallel to refl's
    with foot-to-foot distance > eps; the reflection scan is ordered by
    depth, so the witness is the earliest one.  None when the search depth
    is exhausted."""
    if eps < 0:
        raise GeometryError("eps must be >= 0")
    for cand in enumerate_reflections(group, max_length):
        try:
            cls = classify_pair(refl.hyperplane, cand.hyperplane)
        except GeometryError:
            continue
        if cls.kind is not PairKind.ULTRA_PARALLEL:
            continue
        if hyperplane_distance(refl.hyperplane, cand.hyperplane) > eps:
            return cand
    return None
