"""Deterministic SVG rendering of disk tessellations.

Tile outlines become paths of true circular arcs (the supporting circles of
the geodesic edges), falling back to line segments when an arc's sagitta
drops below half a pixel at the nominal raster size.  Fill color encodes the
reflection length; output bytes depend only on the input tiles.
"""

import math

import numpy as np

from .poincare import disk_arc

# categorical palette for reflection lengths 0..9; the fundamental domain
# (length 0) is grey; larger lengths wrap with a hatch overlay
PALETTE = [
    "#bdbdbd", "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
    "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22",
]

_SAGITTA_LIMIT = 0.002   # disk units; ~0.5 px at a 512 px raster


def _fmt(x):
    return "{:.6f}".format(float(x) + 0.0)


def _arc_command(p, q):
    seg = disk_arc(p, q)
    if seg[0] == "chord":
        return "L {} {}".format(_fmt(q[0]), _fmt(q[1]))
    _, center, radius, _, _ = seg
    a0 = math.atan2(p[1] - center[1], p[0] - center[0])
    a1 = math.atan2(q[1] - center[1], q[0] - center[0])
    delta = (a1 - a0) % (2.0 * math.pi)
    if delta > math.pi:
        delta -= 2.0 * math.pi
    sagitta = radius * (1.0 - math.cos(abs(delta) / 2.0))
    if sagitta < _SAGITTA_LIMIT:
        return "L {} {}".format(_fmt(q[0]), _fmt(q[1]))
    sweep = 1 if delta > 0 else 0
    return "A {} {} 0 0 {} {} {}".format(
        _fmt(radius), _fmt(radius), sweep, _fmt(q[0]), _fmt(q[1]))


def _circle_command(a0, a1):
    q = np.array([math.cos(a1), math.sin(a1)])
    large = 1 if (a1 - a0) > math.pi else 0
    return "A 1 1 0 {} 1 {} {}".format(large, _fmt(q[0]), _fmt(q[1]))


def tile_path(tile):
    """SVG path data for one tile outline."""
    first = None
    cmds = []
    for seg in tile.segments:
        if seg[0] == "geo":
            p, q = seg[1], seg[2]
            if first is None:
                first = p
                cmds.append("M {} {}".format(_fmt(p[0]), _fmt(p[1])))
            cmds.append(_arc_command(p, q))
        else:
            a0, a1 = seg[1], seg[2]
            p = np.array([math.cos(a0), math.sin(a0)])
            if first is None:
                first = p
                cmds.append("M {} {}".format(_fmt(p[0]), _fmt(p[1])))
            cmds.append(_circle_command(a0, a1))
    cmds.append("Z")
    return " ".join(cmds)


def render_tessellation(tiles, highlight=None):
    """Full SVG document (a string) for a list of tiles.

    ``highlight``: optional element word; the matching tile is stroked
    heavier.  A legend lists the reflection lengths present.
    """
    lengths = sorted({t.l_r for t in tiles})
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        'viewBox="-1.05 -1.05 2.1 2.1">',
        '<defs><pattern id="hatch" patternUnits="userSpaceOnUse" '
        'width="0.02" height="0.02" patternTransform="rotate(45)">'
        '<rect width="0.02" height="0.02" fill="none"/>'
        '<line x1="0" y1="0" x2="0" y2="0.02" stroke="#333333" '
        'stroke-width="0.004"/></pattern></defs>',
        '<g transform="scale(1,-1)">',
        '<circle cx="0" cy="0" r="1" fill="#ffffff" stroke="#000000" '
        'stroke-width="0.005"/>',
    ]
    for tile in tiles:
        d = tile_path(tile)
        color = PALETTE[tile.l_r % len(PALETTE)]
        is_hl = highlight is not None and tuple(tile.element.word) == tuple(highlight)
        stroke = "0.012" if is_hl else "0.0035"
        lines.append('<path d="{}" fill="{}" stroke="#222222" '
                     'stroke-width="{}"/>'.format(d, color, stroke))
        if tile.l_r >= len(PALETTE):
            lines.append('<path d="{}" fill="url(#hatch)" stroke="none"/>'.format(d))
    lines.append('</g>')
    for idx, l_r in enumerate(lengths):
        y = -1.0 + 0.07 * idx
        color = PALETTE[l_r % len(PALETTE)]
        lines.append('<rect x="-1.04" y="{}" width="0.05" height="0.05" '
                     'fill="{}"/>'.format(_fmt(y), color))
        suffix = " (hatched)" if l_r >= len(PALETTE) else ""
        lines.append('<text x="-0.98" y="{}" font-size="0.05" '
                     'font-family="monospace">lR={}{}</text>'.format(
                         _fmt(y + 0.045), l_r, suffix))
    lines.append('</svg>')
    return "\n".join(lines) + "\n"
