import numpy as np
import pytest

from hyptiles.errors import GeometryError
from hyptiles.hyperboloid import (
    GeodesicLine,
    Hyperplane,
    PairKind,
    classify_pair,
    common_ideal_point,
    common_perpendicular,
    distance,
    geodesic_endpoints,
    geodesic_through,
    hyperplane_distance,
    ideal_point,
    perpendicular_feet,
    point,
    ray_to_ideal,
    reflect,
    reflection_matrix,
    right_angle_residual,
)
from hyptiles.lorentz import form, random_point, random_spacelike_unit

COSH1 = np.cosh(1.0)
SINH1 = np.sinh(1.0)

H_X = Hyperplane.from_normal([1.0, 0.0, 0.0])
H_TANGENT = Hyperplane.from_normal([1.0, 1.0, 1.0])      # form value with H_X is 1
H_ULTRA = Hyperplane.from_normal([COSH1, 0.0, SINH1])    # form value with H_X is cosh 1


def random_ultra_pair(rng, n, lo=1.02, hi=4.0):
    while True:
        u1 = random_spacelike_unit(rng, n)
        u2 = random_spacelike_unit(rng, n)
        c = abs(form(u1, u2))
        if lo < c < hi:
            return Hyperplane(u1), Hyperplane(u2)


def test_distance_same_point_is_zero():
    assert distance(point((0, 0, 1)), point((0, 0, 1))) == 0.0


def test_distance_hand_value():
    assert distance(point((0, 0, 1)), point((SINH1, 0, COSH1))) == pytest.approx(1.0)


def test_distance_symmetry(rng):
    for _ in range(50):
        x, y = random_point(rng, 2), random_point(rng, 2)
        assert distance(x, y) == pytest.approx(distance(y, x), abs=1e-12)


def test_distance_invalid_points():
    with pytest.raises(GeometryError):
        distance(np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]))


def test_reflect_fixes_points_on_plane():
    assert np.allclose(reflect(H_X, point((0, 0, 1))), (0, 0, 1))


def test_reflect_hand_value():
    got = reflect(H_X, point((SINH1, 0, COSH1)))
    assert np.allclose(got, (-SINH1, 0, COSH1))


def test_reflect_involution_and_form_preserving(rng):
    for _ in range(100):
        h = Hyperplane(random_spacelike_unit(rng, 2))
        x, y = random_point(rng, 2), random_point(rng, 2)
        assert np.abs(reflect(h, reflect(h, x)) - x).max() < 1e-10
        assert abs(form(reflect(h, x), reflect(h, y)) - form(x, y)) < 1e-10


def test_reflection_matrix_matches_formula():
    assert np.allclose(reflection_matrix(H_X), np.diag([-1.0, 1.0, 1.0]))


def test_classify_orthogonal_normals():
    cls = classify_pair(H_X, Hyperplane.from_normal([0, 1, 0]))
    assert cls.kind is PairKind.INTERSECTING
    assert cls.angle == pytest.approx(np.pi / 2)


def test_classify_parallel_and_ideal_point():
    cls = classify_pair(H_X, H_TANGENT)
    assert cls.kind is PairKind.PARALLEL
    xi = common_ideal_point(H_X, H_TANGENT)
    assert np.allclose(xi, (0, 1, 1), atol=1e-9)


def test_classify_ultra():
    assert classify_pair(H_X, H_ULTRA).kind is PairKind.ULTRA_PARALLEL


def test_classify_equal_hyperplanes_error():
    with pytest.raises(GeometryError):
        classify_pair(H_X, Hyperplane.from_normal([-1.0, 0, 0]))


def test_classify_symmetric(rng):
    for _ in range(50):
        h1 = Hyperplane(random_spacelike_unit(rng, 2))
        h2 = Hyperplane(random_spacelike_unit(rng, 2))
        a, b = classify_pair(h1, h2), classify_pair(h2, h1)
        assert a.kind == b.kind


def test_common_ideal_point_fixed_by_either_reflection():
    xi = common_ideal_point(H_X, H_TANGENT)
    assert np.abs(reflect(H_X, xi) - xi).max() < 1e-9
    assert np.abs(reflect(H_TANGENT, xi) - xi).max() < 1e-9


def test_common_ideal_point_requires_parallel():
    with pytest.raises(GeometryError):
        common_ideal_point(H_X, H_ULTRA)


def test_perpendicular_feet_hand_values():
    f1, f2 = perpendicular_feet(H_X, H_ULTRA)
    assert np.allclose(f1, (0, 0, 1), atol=1e-12)
    assert np.allclose(f2, (SINH1, 0, COSH1), atol=1e-12)


def test_common_perpendicular_right_angles(rng):
    for _ in range(50):
        h1, h2 = random_ultra_pair(rng, 2)
        line = common_perpendicular(h1, h2)
        assert right_angle_residual(h1, line) < 1e-8
        assert right_angle_residual(h2, line) < 1e-8
        f1, f2 = perpendicular_feet(h1, h2)
        assert abs(form(f1, h1.normal)) < 1e-8
        assert abs(form(f2, h2.normal)) < 1e-8


def test_common_perpendicular_requires_ultra():
    with pytest.raises(GeometryError):
        common_perpendicular(H_X, H_TANGENT)


def test_hyperplane_distance_hand_value():
    assert hyperplane_distance(H_X, H_ULTRA) == pytest.approx(1.0)


def test_hyperplane_distance_zero_for_intersecting():
    assert hyperplane_distance(H_X, Hyperplane.from_normal([0, 1, 0])) == 0.0


def test_hyperplane_distance_closed_form_oracle(rng):
    # independent closed form: arccosh |<u1|u2>|
    for _ in range(100):
        h1, h2 = random_ultra_pair(rng, 2)
        expected = np.arccosh(abs(form(h1.normal, h2.normal)))
        assert hyperplane_distance(h1, h2) == pytest.approx(expected, abs=1e-8)


def test_geodesic_endpoints_hand_values():
    line = GeodesicLine(np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0]))
    e1, e2 = geodesic_endpoints(line)
    assert np.allclose(e1, (1, 0, 1))
    assert np.allclose(e2, (-1, 0, 1))


def test_geodesic_endpoints_invariant_under_self_maps(rng):
    # reflecting across a plane whose normal is the tangent maps the line to
    # itself; the endpoint set is preserved
    line = GeodesicLine(np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0]))
    h = Hyperplane.from_normal(line.tangent)
    e = np.stack(geodesic_endpoints(line))
    img = reflect(h, e)
    img = img / img[:, -1:]
    assert (np.allclose(img, e) or np.allclose(img[::-1], e))


def test_perpendicular_endpoints_swapped_by_either_mirror(rng):
    for _ in range(20):
        h1, h2 = random_ultra_pair(rng, 2)
        line = common_perpendicular(h1, h2)
        e = np.stack(geodesic_endpoints(line))
        for h in (h1, h2):
            img = reflect(h, e)
            img = img / img[:, -1:]
            assert np.allclose(img, e[::-1], atol=1e-8) or np.allclose(img, e, atol=1e-8)


def test_perpendicular_uniqueness_perturbation(rng):
    h1, h2 = random_ultra_pair(rng, 2)
    line = common_perpendicular(h1, h2)
    for _ in range(200):
        dp = rng.normal(size=3, scale=1e-3)
        dt = rng.normal(size=3, scale=1e-3)
        p = line.point + dp
        p = p / np.sqrt(-form(p, p))
        t = line.tangent + dt
        t = t + form(t, p) * p  # restore form-orthogonality to p
        t = t / np.sqrt(form(t, t))
        cand = GeodesicLine(p, t)
        moved = max(np.abs(p - line.point).max(), np.abs(t - line.tangent).max())
        if moved < 1e-6:
            continue
        assert (right_angle_residual(h1, cand) > 1e-8
                or right_angle_residual(h2, cand) > 1e-8)


def test_hyperplane_through_both_normals_n3(rng):
    # in H^3 a plane orthogonal to both mirrors of an ultra-parallel pair
    # contains both normals in its subspace
    h1, h2 = random_ultra_pair(rng, 3)
    j = np.ones(4)
    j[-1] = -1.0
    a = np.stack([h1.normal * j, h2.normal * j])
    _, _, vt = np.linalg.svd(a)
    cands = [v for v in vt[2:] if form(v, v) > 1e-6]
    assert cands
    hperp = Hyperplane.from_normal(cands[0])
    assert abs(form(hperp.normal, h1.normal)) < 1e-9
    assert abs(form(hperp.normal, h2.normal)) < 1e-9


def test_geodesic_through_and_ray(rng):
    x, y = random_point(rng, 2), random_point(rng, 2)
    line = geodesic_through(x, y)
    d = distance(x, y)
    assert np.abs(line.at(d) - y).max() < 1e-9
    xi = ideal_point((1.0, 0.0, 1.0))
    ray = ray_to_ideal(x, xi)
    far = ray.at(30.0)
    assert np.abs(far / far[-1] - xi).max() < 1e-8
