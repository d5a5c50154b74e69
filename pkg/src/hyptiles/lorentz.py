"""Minkowski linear algebra over the bilinear form of signature (n, 1).

Vectors are plain numpy arrays of length n+1; the last coordinate carries the
negative sign of the form.  Everything else in the package (points, mirrors,
group elements) reduces to these vectors and to form-preserving matrices.
"""

import numpy as np

from .errors import GeometryError

TOL_FORM = 1e-9    # form preservation / Gram round-trips
TOL_POINT = 1e-7   # point coincidence
TOL_CLASS = 1e-7   # |<u1|u2>| - 1 threshold separating tangent mirror pairs
TOL_ELEM = 1e-6    # entrywise matrix comparison for group element identity


def form(a, b):
    """Evaluate the bilinear form sum_i<=n a_i b_i - a_{n+1} b_{n+1}.

    Broadcasts over leading axes, so stacked vectors work directly.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[-1] != b.shape[-1]:
        raise GeometryError("dimension mismatch: {} vs {}".format(a.shape[-1], b.shape[-1]))
    return (a[..., :-1] * b[..., :-1]).sum(axis=-1) - a[..., -1] * b[..., -1]


def form_matrix(dim):
    """diag(1, ..., 1, -1) of size dim x dim."""
    j = np.eye(dim)
    j[-1, -1] = -1.0
    return j


def apply(matrix, v):
    """Apply a linear map to a vector (or a stack of vectors)."""
    v = np.asarray(v, dtype=float)
    return v @ np.asarray(matrix, dtype=float).T


def compose(a, b):
    return np.asarray(a, dtype=float) @ np.asarray(b, dtype=float)


def invert(matrix):
    """Inverse of a form-preserving matrix, computed as J M^T J."""
    m = np.asarray(matrix, dtype=float)
    j = form_matrix(m.shape[0])
    return j @ m.T @ j


def is_isometry(matrix, tol=TOL_FORM):
    """True when M^T J M = J (scale-aware) and M maps the upper sheet to itself."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    j = form_matrix(m.shape[0])
    scale = max(1.0, float(np.abs(m).max()) ** 2)
    if np.abs(m.T @ j @ m - j).max() > tol * scale:
        return False
    # image of (0, ..., 0, 1) must stay on the upper sheet
    return m[-1, -1] > 0


def gram_signature(g, tol=1e-8):
    """Counts (positive, zero, negative) of eigenvalues, with a relative zero band."""
    w = np.linalg.eigvalsh(np.asarray(g, dtype=float))
    band = tol * max(1.0, float(np.abs(w).max()))
    return (int((w > band).sum()), int((np.abs(w) <= band).sum()), int((w < -band).sum()))


def realize_gram(g):
    """Realize a symmetric unit-diagonal Gram matrix by vectors in R^{m-1,1}.

    Returns an (m, m) array whose rows u_i satisfy form(u_i, u_j) = G_ij.
    The matrix must have signature (m-1, 1); anything else (positive definite,
    degenerate, or with several negative directions) is rejected, which is the
    gate excluding spherical and affine configurations.

    The construction is an eigendecomposition with the negative eigenvalue
    ordered last and eigenvector signs fixed so the first nonzero entry of
    each eigenvector is positive, making the output deterministic.
    """
    g = np.asarray(g, dtype=float)
    m = g.shape[0]
    if g.ndim != 2 or g.shape[1] != m:
        raise GeometryError("Gram matrix must be square")
    if np.abs(g - g.T).max() > TOL_FORM:
        raise GeometryError("Gram matrix must be symmetric")
    if np.abs(np.diag(g) - 1.0).max() > TOL_FORM:
        raise GeometryError("Gram matrix must have unit diagonal")

    w, v = np.linalg.eigh(g)
    pos, zero, neg = gram_signature(g)
    if (pos, zero, neg) != (m - 1, 0, 1):
        raise GeometryError(
            "not a hyperbolic simplex group: Gram signature is ({}, {}, {}), "
            "need ({}, 0, 1)".format(pos, zero, neg, m - 1))

    # eigh sorts ascending, so the negative eigenvalue sits first; move it last
    order = list(range(1, m)) + [0]
    w = w[order]
    v = v[:, order]
    for k in range(m):
        col = v[:, k]
        nz = np.nonzero(np.abs(col) > 1e-12 * np.abs(col).max())[0]
        if nz.size and col[nz[0]] < 0:
            v[:, k] = -col
    u = v * np.sqrt(np.abs(w))
    return u


def random_spacelike_unit(rng, n):
    """A unit spacelike vector in R^{n,1}, rejection-sampled from Gaussians."""
    while True:
        v = rng.normal(size=n + 1)
        q = form(v, v)
        if q > 0.1:
            return v / np.sqrt(q)


def random_point(rng, n, spread=1.0):
    """A point on the upper sheet, Gaussian in the spatial coordinates."""
    x = rng.normal(scale=spread, size=n)
    return np.concatenate([x, [np.sqrt(1.0 + x @ x)]])
