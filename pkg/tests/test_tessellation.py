import numpy as np
import pytest

from hyptiles.coxeter import enumerate_elements, enumerate_reflections, reduce_word
from hyptiles.errors import GeometryError, SearchInconclusive
from hyptiles.hyperboloid import PairKind, classify_pair
from hyptiles.poincare import ConeNbhd, nbhd_contains
from hyptiles.reflength import reflection_length
from hyptiles.tessellation import (
    build_boundary_catalog,
    density_scan,
    find_tile_with_reflection_length,
    generate_tiles,
    length_values_near,
    make_tile,
    neighborhood_length_spectrum,
    tile_in_nbhd,
    tile_meets_nbhd,
    tile_sample_points,
    wall_boundary_points,
)


def test_fundamental_tile(tri344):
    tiles = generate_tiles(tri344, 0)
    assert len(tiles) == 1
    assert tiles[0].l_r == 0 and tiles[0].l_s == 0
    assert len(tiles[0].vertices) == 3


def test_tile_count_bijection(tri344, tri23inf):
    for g in (tri344, tri23inf):
        for depth in (1, 3, 5):
            assert len(generate_tiles(g, depth)) == len(enumerate_elements(g, depth))


def test_adjacent_tiles_differ_by_reflection(tri344):
    elements = enumerate_elements(tri344, 4)
    el = elements[17]
    for s in range(3):
        neighbor = reduce_word(tri344, el.word + (s,))
        quotient = neighbor.matrix @ np.linalg.inv(el.matrix)
        sq = quotient @ quotient
        assert np.abs(sq - np.eye(3)).max() < 1e-6 * max(1.0, np.abs(sq).max())


def test_wall_boundary_points_on_circle(tri344):
    for u in tri344.normals:
        for e in wall_boundary_points(u):
            assert np.linalg.norm(e) == pytest.approx(1.0, abs=1e-12)
            # the lifted light vector lies on the wall
            lifted = np.array([e[0], e[1], 1.0])
            assert abs(np.dot(lifted[:2], u[:2]) - u[2]) < 1e-12


def test_universal_tile_outline(universal):
    tile = make_tile(universal, universal.identity)
    assert tile.l_r == 0
    kinds = [s[0] for s in tile.segments]
    assert kinds.count("geo") == 3 and kinds.count("circle") == 3
    assert len(tile.limit_arcs) == 3
    pts = tile_sample_points(tile, 16)
    assert np.linalg.norm(pts, axis=1).max() <= 1.0 + 1e-12
    # the basepoint (origin) is interior to the fundamental tile
    for i in range(3):
        assert universal.wall_margin(i, universal.basepoint) > 0


def test_tile_in_nbhd_fundamental_fails(tri344):
    tile = generate_tiles(tri344, 0)[0]
    nbhd = ConeNbhd(np.array([1.0, 0.0]), 2.0, 0.25)
    assert not tile_in_nbhd(tile, nbhd, 8)


def test_tile_in_nbhd_sampling_monotone(tri23inf):
    # nested sample grids: containment at 64 samples implies containment at 8
    catalog = build_boundary_catalog(tri23inf, 0)
    xi = catalog.tangency_points[0].boundary
    nbhd = ConeNbhd(xi, 1.0, 0.8)
    # tiles marching along the tangency: deep ones enter the neighborhood
    tiles = [make_tile(tri23inf,
                       reduce_word(tri23inf, tuple(2 if i % 2 == 0 else 1
                                                   for i in range(m))), l_r=0)
             for m in range(1, 16)]
    checked = 0
    for tile in tiles:
        if tile_in_nbhd(tile, nbhd, 64):
            checked += 1
            assert tile_in_nbhd(tile, nbhd, 8)
    assert checked > 0


def test_catalog_tri23inf_depth0(tri23inf):
    catalog = build_boundary_catalog(tri23inf, 0)
    assert len(catalog.tangency_points) == 1
    p = catalog.tangency_points[0]
    assert p.kind == "tangency"
    w1, w2 = p.witnesses
    assert {w1.element.word, w2.element.word} == {(1,), (2,)}
    assert not catalog.perpendicular_points


def test_catalog_universal_depth0(universal):
    catalog = build_boundary_catalog(universal, 0)
    assert not catalog.tangency_points
    # three ultra-parallel pairs contribute six distinct endpoints
    assert len(catalog.perpendicular_points) == 6


def test_catalog_tri344_depth0_empty(tri344):
    catalog = build_boundary_catalog(tri344, 0)
    assert not catalog.all_points()


def test_catalog_soundness(tri23inf, universal):
    from hyptiles.hyperboloid import (common_ideal_point, common_perpendicular,
                                      right_angle_residual)
    cat = build_boundary_catalog(tri23inf, 2)
    for p in cat.tangency_points[:8]:
        h1, h2 = (w.hyperplane for w in p.witnesses)
        assert classify_pair(h1, h2).kind is PairKind.PARALLEL
        xi = common_ideal_point(h1, h2)
        assert np.abs(xi - p.point).max() < 1e-6
    cat_u = build_boundary_catalog(universal, 1)
    for p in cat_u.perpendicular_points[:8]:
        h1, h2 = (w.hyperplane for w in p.witnesses)
        assert classify_pair(h1, h2).kind is PairKind.ULTRA_PARALLEL
        line = common_perpendicular(h1, h2)
        assert right_angle_residual(h1, line) < 1e-8
        assert right_angle_residual(h2, line) < 1e-8


def test_find_tile_k1_is_marching_mirror(tri23inf):
    catalog = build_boundary_catalog(tri23inf, 0)
    point = catalog.tangency_points[0]
    nbhd = ConeNbhd(point.boundary, 2.0, 0.25)
    res = find_tile_with_reflection_length(tri23inf, point, nbhd, 1)
    assert res.tile.l_r == 1
    assert res.tile.element.word == tuple(reduce_word(tri23inf, res.mirror_word).word)
    assert tile_in_nbhd(res.tile, nbhd, 128)
    # structural identity: the produced mirror element is an involution whose
    # reflection formula reproduces the returned normal
    el = reduce_word(tri23inf, res.mirror_word)
    sq = el.matrix @ el.matrix
    assert np.abs(sq - np.eye(3)).max() < 1e-6 * max(1.0, np.abs(sq).max())
    u = res.mirror_normal
    refl_mat = np.eye(3) - 2.0 * np.outer(u, u * np.array([1.0, 1.0, -1.0]))
    assert np.abs(refl_mat - el.matrix).max() < 1e-5 * max(1.0, np.abs(el.matrix).max())


def test_find_tile_mirror_is_catalogued_reflection(universal):
    # cross-module identity: the marching mirror is an enumerated reflection
    # at its marching depth (cheap to check in the free product)
    catalog = build_boundary_catalog(universal, 0)
    point = catalog.perpendicular_points[0]
    nbhd = ConeNbhd(point.boundary, 2.0, 0.25)
    res = find_tile_with_reflection_length(universal, point, nbhd, 1)
    refls = enumerate_reflections(universal, res.mirror_steps)
    normals = [r.hyperplane.normal for r in refls]
    assert any(np.abs(res.mirror_normal - u).max() < 1e-6 * max(1, np.abs(u).max())
               or np.abs(res.mirror_normal + u).max() < 1e-6 * max(1, np.abs(u).max())
               for u in normals)


def test_find_tile_k0_rejected(tri23inf):
    catalog = build_boundary_catalog(tri23inf, 0)
    point = catalog.tangency_points[0]
    with pytest.raises(GeometryError):
        find_tile_with_reflection_length(
            tri23inf, point, ConeNbhd(point.boundary, 2.0, 0.25), 0)


def test_find_tile_small_k(tri23inf):
    catalog = build_boundary_catalog(tri23inf, 0)
    point = catalog.tangency_points[0]
    nbhd = ConeNbhd(point.boundary, 2.0, 0.25)
    for k in (1, 2, 3):
        res = find_tile_with_reflection_length(tri23inf, point, nbhd, k)
        assert res.tile.l_r == k
        assert reflection_length(tri23inf, res.tile.element) == k
        assert tile_in_nbhd(res.tile, nbhd, 64)


def test_find_tile_universal(universal):
    catalog = build_boundary_catalog(universal, 0)
    point = catalog.perpendicular_points[0]
    nbhd = ConeNbhd(point.boundary, 2.0, 0.25)
    for k in (1, 2):
        res = find_tile_with_reflection_length(universal, point, nbhd, k)
        assert res.tile.l_r == k
        assert tile_in_nbhd(res.tile, nbhd, 64)


def test_find_tile_inconclusive_at_tiny_caps(tri23inf):
    catalog = build_boundary_catalog(tri23inf, 0)
    point = catalog.tangency_points[0]
    nbhd = ConeNbhd(point.boundary, 2.0, 0.25)
    with pytest.raises(SearchInconclusive):
        find_tile_with_reflection_length(tri23inf, point, nbhd, 1, mirror_cap=0)


def test_density_gap_shrinks(tri344):
    r2 = density_scan(tri344, 2, 90)
    r4 = density_scan(tri344, 4, 90)
    assert r4.point_count > r2.point_count
    assert r4.max_gap <= r2.max_gap
    assert r2.polytope_hypothesis


def test_density_empty_catalog(tri344):
    report = density_scan(tri344, 0, 36)
    assert report.max_gap == pytest.approx(np.pi)


def test_density_universal_flagged(universal):
    report = density_scan(universal, 1, 36)
    assert not report.polytope_hypothesis


def test_spectrum_identity(universal):
    report = neighborhood_length_spectrum(
        universal, universal.identity, [0.8, 0.4, 0.2], r=2.0, depth=5)
    assert report.rows[-1][1] == [0]


def test_spectrum_generator(universal):
    s1 = universal.generator(0)
    report = neighborhood_length_spectrum(
        universal, s1, [0.8, 0.4, 0.2, 0.1], r=2.0, depth=5)
    assert report.rows[-1][1] == [1]
    sizes = [len(values) for _, values in report.rows]
    assert sizes == sorted(sizes, reverse=True)


def test_spectrum_contrast_grows_with_depth(tri23inf):
    # at a tangency point the neighborhood keeps accumulating new reflection
    # lengths as the generation depth grows
    catalog = build_boundary_catalog(tri23inf, 0)
    xi = catalog.tangency_points[0].boundary
    values = [length_values_near(tri23inf, xi, 1.0, 0.8, depth, samples=16)
              for depth in (2, 10)]
    assert set(values[0]) < set(values[1])
