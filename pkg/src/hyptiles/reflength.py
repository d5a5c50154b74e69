"""Reflection length: word length over the set of all reflections.

Two independent routes:

* ``reflection_length`` uses the deletion characterization: for a reduced
  word s_1 ... s_n, the reflection length is the least p such that deleting
  some p letters leaves a product equal to the identity.  Subsets are scanned
  in lexicographic order for ascending p, restricted to p = n (mod 2); the
  worst case is exponential in n, acceptable at desk scale.

* ``ReflectionLengthTable`` runs a breadth-first search from the identity
  over left multiplication by reflections.  Soundness of its truncations:
  a deletion factorization for w multiplies prefix-conjugate reflections of
  word length <= 2 l_S(w) - 1, and its left partial products stay within the
  ball of radius l_S(w) (fold the defining gallery at the deleted walls), so
  restricting states to that ball and edges to catalogued reflections of
  depth l_S(w) - 1 still finds a shortest factorization.
"""

from itertools import combinations, islice

import numpy as np

from .coxeter import _PointTable, enumerate_elements, enumerate_reflections, reduce_word
from .errors import GeometryError, ResourceLimitError
from .lorentz import TOL_ELEM

_CHUNK = 100_000


def _segment_products(mats):
    """seg[a, b] = product of mats[a:b] (half-open); identity on the diagonal."""
    n = len(mats)
    d = mats[0].shape[0] if n else 1
    seg = np.zeros((n + 1, n + 1, d, d))
    idx = np.arange(d)
    seg[:, :, idx, idx] = 1.0
    for a in range(n + 1):
        for b in range(a + 1, n + 1):
            seg[a, b] = seg[a, b - 1] @ mats[b - 1]
    return seg


def _deletion_succeeds(seg, n, p, tol, chunk=_CHUNK):
    """True when some p-subset of deletions leaves the identity product."""
    d = seg.shape[-1]
    flat = seg.reshape((n + 1) * (n + 1), d, d)
    eye = np.eye(d)
    combos = combinations(range(n), p)
    while True:
        block = np.array(list(islice(combos, chunk)), dtype=np.int64)
        if block.size == 0:
            return False
        m = block.shape[0]
        # kept pieces: [0, i1), (i1, i2), ..., (ip, n)
        starts = np.concatenate([np.zeros((m, 1), dtype=np.int64), block + 1], axis=1)
        ends = np.concatenate([block, np.full((m, 1), n, dtype=np.int64)], axis=1)
        prod = flat[starts[:, 0] * (n + 1) + ends[:, 0]]
        for j in range(1, p + 1):
            prod = prod @ flat[starts[:, j] * (n + 1) + ends[:, j]]
        hits = np.abs(prod - eye).max(axis=(1, 2)) <= tol
        if hits.any():
            return True


def reflection_length(group, element, chunk=_CHUNK):
    """Reflection length of an element via the deletion characterization."""
    word = element.word
    n = len(word)
    if n == 0:
        return 0
    mats = [group.generator_matrices[i] for i in word]
    seg = _segment_products(mats)
    scale = max(1.0, float(np.abs(seg[0]).max()))
    tol = TOL_ELEM * scale
    start = 2 - (n % 2)
    for p in range(start, n, 2):
        if _deletion_succeeds(seg, n, p, tol, chunk):
            return p
    return n


class ReflectionLengthTable:
    """Shared BFS oracle for every element of word length <= max_ls.

    Edges are left multiplications by the catalogued reflections of depth
    max_ls - 1 (covering all reflections of word length <= 2 max_ls - 1);
    states are the ball elements, identified by their moved basepoint.
    """

    def __init__(self, group, max_ls, max_count=500_000):
        self.group = group
        self.max_ls = max_ls
        self.elements = enumerate_elements(group, max_ls, max_count)
        self._table = _PointTable(group.rank)
        points = []
        for el in self.elements:
            self._table.insert(el.point)
            points.append(el.point)
        self._points = np.stack(points)
        refls = enumerate_reflections(group, max(max_ls - 1, 0), max_count)
        self._edges = [r.element.matrix for r in refls]
        self._dist = self._bfs()

    def _bfs(self):
        n = len(self.elements)
        dist = np.full(n, -1, dtype=np.int64)
        dist[0] = 0
        frontier = [0]
        level = 0
        while frontier:
            level += 1
            nxt = []
            base = self._points[frontier]
            for mat in self._edges:
                moved = base @ mat.T
                for row in moved:
                    idx = self._table.find(row)
                    if idx is not None and dist[idx] < 0:
                        dist[idx] = level
                        nxt.append(idx)
            frontier = nxt
        return dist

    def length(self, element):
        if len(element.word) > self.max_ls:
            raise ResourceLimitError(
                "element of length {} outside the table's ball {}".format(
                    len(element.word), self.max_ls))
        idx = self._table.find(element.point)
        if idx is None or self._dist[idx] < 0:
            raise GeometryError("element not found in the enumerated ball")
        return int(self._dist[idx])


def reflection_length_bfs(group, element):
    """BFS reflection length of one element (table cached per ball radius)."""
    max_ls = len(element.word)
    key = ("rl_table", max_ls)
    table = group._caches.get(key)
    if table is None:
        table = ReflectionLengthTable(group, max_ls)
        group._caches[key] = table
    return table.length(element)


def step_pair(group, element, reflection):
    """(l_R(w), l_R(w r)): right multiplication by a reflection moves the
    reflection length by exactly one."""
    before = reflection_length(group, element)
    moved = reduce_word(group, element.word + reflection.element.word)
    after = reflection_length(group, moved)
    return before, after
