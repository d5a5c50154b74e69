"""Command line surface.

Exit codes: 0 success, 2 parse/usage error, 3 geometric precondition,
4 search inconclusive at its caps, 5 resource budget exceeded.
"""

import argparse
import math
import sys
from fractions import Fraction

import numpy as np

from .coxeter import build_group, enumerate_elements
from .errors import GeometryError, ResourceLimitError, SearchInconclusive, SpecError
from .hyperboloid import (
    PairKind,
    classify_pair,
    common_ideal_point,
    common_perpendicular,
    geodesic_endpoints,
    hyperplane_distance,
    perpendicular_feet,
)
from .lorentz import TOL_CLASS, TOL_ELEM, TOL_FORM, TOL_POINT
from .poincare import (
    ConeNbhd,
    boundary_from_ideal,
    euclid_common_perpendicular,
    gsphere_relation,
    hyperplane_to_gsphere,
    shrink_parallel,
    shrink_ultraparallel,
    to_ball,
)
from .specfile import load_spec
from .svg import render_tessellation
from .tessellation import (
    build_boundary_catalog,
    density_scan,
    find_tile_with_reflection_length,
    generate_tiles,
)


def _stamp(args, extra=""):
    bits = ["spec={}".format(args.spec),
            "tol_form={:g} tol_point={:g} tol_class={:g} tol_elem={:g}".format(
                TOL_FORM, TOL_POINT, TOL_CLASS, TOL_ELEM)]
    if extra:
        bits.append(extra)
    return "# " + " ".join(bits)


def _angle_label(angle):
    frac = Fraction(angle / math.pi).limit_denominator(64)
    if abs(float(frac) * math.pi - angle) < 1e-9:
        if frac.numerator == 1:
            return "pi/{}".format(frac.denominator)
        return "{}pi/{}".format(frac.numerator, frac.denominator)
    return "{:.10f}".format(angle)


def _wall_pair(group, i, j):
    rank = group.rank
    if not (1 <= i <= rank and 1 <= j <= rank) or i == j:
        raise SpecError("wall indices must be distinct and in 1..{}".format(rank))
    return group.walls[i - 1], group.walls[j - 1]


def cmd_classify(args):
    group = build_group(load_spec(args.spec))
    h1, h2 = _wall_pair(group, args.i, args.j)
    cls = classify_pair(h1, h2)
    if cls.kind is PairKind.INTERSECTING:
        print("intersecting angle={}".format(_angle_label(cls.angle)))
    elif cls.kind is PairKind.PARALLEL:
        xi = common_ideal_point(h1, h2)
        b = boundary_from_ideal(xi)
        print("parallel ideal_point=({})".format(
            ",".join("{:.10f}".format(v) for v in b)))
    else:
        d = hyperplane_distance(h1, h2)
        print("ultra d={!r}".format(round(d, 6)))
    return 0


def cmd_perp(args):
    group = build_group(load_spec(args.spec))
    h1, h2 = _wall_pair(group, args.i, args.j)
    line = common_perpendicular(h1, h2)
    f1, f2 = perpendicular_feet(h1, h2)
    perp = euclid_common_perpendicular(hyperplane_to_gsphere(h1),
                                       hyperplane_to_gsphere(h2))
    ends_h = np.stack([boundary_from_ideal(e) for e in geodesic_endpoints(line)])
    ends_e = perp.endpoints
    residual = min(np.abs(ends_h - ends_e).max(),
                   np.abs(ends_h - ends_e[::-1]).max())
    print(_stamp(args))
    print("foot_on_wall_{} ball=({})".format(
        args.i, ",".join("{:.10f}".format(v) for v in to_ball(f1))))
    print("foot_on_wall_{} ball=({})".format(
        args.j, ",".join("{:.10f}".format(v) for v in to_ball(f2))))
    for k, e in enumerate(ends_e):
        print("endpoint_{} ball=({})".format(
            k, ",".join("{:.10f}".format(v) for v in e)))
    print("distance={:.10f}".format(hyperplane_distance(h1, h2)))
    print("cross_model_residual={:.3e}".format(residual))
    print("right_angle_residuals={:.3e},{:.3e}".format(*perp.right_angle_residuals))
    return 0


def cmd_shrink(args):
    group = build_group(load_spec(args.spec))
    h1, h2 = _wall_pair(group, args.i, args.j)
    s1 = hyperplane_to_gsphere(h1)
    s2 = hyperplane_to_gsphere(h2)
    kind = gsphere_relation(s1, s2)
    if kind is PairKind.PARALLEL:
        spheres = shrink_parallel(s1, s2, args.k)
    elif kind is PairKind.ULTRA_PARALLEL:
        spheres = [st.sphere for st in shrink_ultraparallel(s1, s2, args.k)]
    else:
        raise GeometryError("walls {} and {} cross; nothing to shrink toward".format(
            args.i, args.j))
    dim = group.dim
    header = "step,radius," + ",".join("c{}".format(d + 1) for d in range(dim))
    rows = [header]
    for step, s in enumerate(spheres):
        if s.is_sphere:
            center, radius = s.center, s.radius
        else:
            center, radius = s.center, float("inf")
        rows.append("{},{:.12g},{}".format(
            step, radius, ",".join("{:.12g}".format(c) for c in center)))
    out = "\n".join(rows) + "\n"
    _write_text(args.out, out)
    return 0


def cmd_tessellate(args):
    group = build_group(load_spec(args.spec))
    tiles = generate_tiles(group, args.depth, max_count=args.max_elements)
    doc = render_tessellation(tiles)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(doc)
    print("{} tiles -> {}".format(len(tiles), args.out))
    return 0


def _select_point(catalog, selector):
    try:
        kind, idx = selector.split(":")
        idx = int(idx)
    except ValueError:
        raise SpecError("point selector must look like ip:0 or pup:1") from None
    pool = {"ip": catalog.tangency_points, "pup": catalog.perpendicular_points}.get(kind)
    if pool is None:
        raise SpecError("unknown point kind {!r} (use ip or pup)".format(kind))
    if not 0 <= idx < len(pool):
        raise SpecError("point index {} out of range (catalog has {})".format(
            idx, len(pool)))
    return pool[idx]


def cmd_findtile(args):
    if args.k < 1:
        raise SpecError("k must be >= 1")
    group = build_group(load_spec(args.spec))
    catalog = build_boundary_catalog(group, args.catalog_depth)
    point = _select_point(catalog, args.point)
    nbhd = ConeNbhd(point.boundary, args.r, args.eps)
    res = find_tile_with_reflection_length(
        group, point, nbhd, args.k,
        mirror_cap=args.mirror_cap, bfs_cap=args.bfs_cap, samples=args.samples)
    print(_stamp(args, "caps: mirror={} bfs={} samples={}".format(
        args.mirror_cap, args.bfs_cap, args.samples)))
    print("point kind={} angle={:.10f}".format(point.kind, point.angle))
    print("neighborhood r={:g} eps={:g}".format(args.r, args.eps))
    print("mirror steps={} word_length={}".format(
        res.mirror_steps, len(res.mirror_word)))
    print("tile word_length={} reflection_length={}".format(
        res.tile.l_s, res.tile.l_r))
    print("tiles_examined={}".format(res.tiles_examined))
    print("word={}".format(".".join(str(s + 1) for s in res.tile.element.word)))
    if args.svg:
        tiles = generate_tiles(group, min(args.catalog_depth + 4, 8))
        tiles.append(res.tile)
        with open(args.svg, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(render_tessellation(tiles, highlight=res.tile.element.word))
    return 0


def cmd_density(args):
    if args.directions < 1:
        raise SpecError("directions must be >= 1")
    group = build_group(load_spec(args.spec))
    report = density_scan(group, args.depth, args.directions)
    if not report.polytope_hypothesis:
        print("warning: chamber is not a polytope; density statement does not apply",
              file=sys.stderr)
    rows = ["direction,gap"]
    for d, gap in zip(report.directions, report.gaps):
        rows.append("{:.10f},{:.10f}".format(d, gap))
    _write_text(args.out, "\n".join(rows) + "\n")
    print("max_gap={:.10f} points={}".format(report.max_gap, report.point_count))
    return 0


def _write_text(path, text):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hyptiles",
        description="Hyperbolic reflection groups: wall classification, common "
                    "perpendiculars, shrinking mirrors, tessellations, and "
                    "prescribed reflection lengths near the boundary.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a generator wall pair")
    p.add_argument("spec", help="builtin spec name or spec file path")
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("perp", help="common perpendicular of two walls")
    p.add_argument("spec")
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.set_defaults(func=cmd_perp)

    p = sub.add_parser("shrink", help="shrinking mirror sequence as CSV")
    p.add_argument("spec")
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.add_argument("k", type=int, help="sequence length")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_shrink)

    p = sub.add_parser("tessellate", help="render the tessellation as SVG")
    p.add_argument("spec")
    p.add_argument("depth", type=int)
    p.add_argument("out", help="output SVG path")
    p.add_argument("--max-elements", type=int, default=500_000)
    p.set_defaults(func=cmd_tessellate)

    p = sub.add_parser("findtile", help="find a tile of prescribed reflection "
                       "length inside a boundary neighborhood")
    p.add_argument("spec")
    p.add_argument("--point", required=True, help="catalog point, e.g. ip:0 or pup:2")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--eps", type=float, default=0.25)
    p.add_argument("--catalog-depth", type=int, default=0)
    p.add_argument("--mirror-cap", type=int, default=200)
    p.add_argument("--bfs-cap", type=int, default=16)
    p.add_argument("--samples", type=int, default=32)
    p.add_argument("--svg", default=None, help="optional overlay SVG path")
    p.set_defaults(func=cmd_findtile)

    p = sub.add_parser("density", help="angular gaps to the boundary catalog")
    p.add_argument("spec")
    p.add_argument("depth", type=int)
    p.add_argument("directions", type=int)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_density)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SpecError as exc:
        print("error: {}".format(exc), file=sys.stderr)
        return 2
    except GeometryError as exc:
        print("geometric error: {}".format(exc), file=sys.stderr)
        return 3
    except SearchInconclusive as exc:
        print("inconclusive: {}".format(exc), file=sys.stderr)
        return 4
    except ResourceLimitError as exc:
        print("resource limit: {}".format(exc), file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
