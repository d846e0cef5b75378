"""Deterministic SVG pictures of surfaces and fundamental domains.

Floating point appears here only as fixed-precision display coordinates;
nothing rendered feeds back into any computation.
"""

from __future__ import annotations

from typing import Dict, List, Tuple

from .errors import VeechKitError
from .field import Vec2
from .hyperbolic import BoundaryPoint, Geodesic, HPoint
from .surface import EdgeRef, TranslationSurface

_ROMAN = [
    (1000, "M"), (900, "CM"), (500, "D"), (400, "CD"), (100, "C"), (90, "XC"),
    (50, "L"), (40, "XL"), (10, "X"), (9, "IX"), (5, "V"), (4, "IV"), (1, "I"),
]


def roman(n: int) -> str:
    if n <= 0:
        raise ValueError("roman numerals start at 1")
    out = []
    for value, token in _ROMAN:
        while n >= value:
            out.append(token)
            n -= value
    return "".join(out)


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _layout(s: TranslationSurface) -> List[List[Tuple[float, float]]]:
    """Place polygons edge-to-edge along a gluing spanning tree."""
    offsets: Dict[int, Vec2] = {}
    zero = s.polygons[0].vertices[0] - s.polygons[0].vertices[0]
    offsets[0] = Vec2(zero.x, zero.y)
    queue = [0]
    while queue:
        p = queue.pop(0)
        poly = s.polygons[p]
        for e in range(len(poly)):
            q, f = s.glued_to(EdgeRef(p, e))
            if q in offsets:
                continue
            # partner edge (q, f) must coincide with edge (p, e) reversed
            b_world = poly.vertices[(e + 1) % len(poly)] + offsets[p]
            a_local = s.polygons[q].vertices[f]
            offsets[q] = b_world - a_local
            queue.append(q)
    placed = []
    for p, poly in enumerate(s.polygons):
        placed.append([
            ((v + offsets[p]).x.approx(), (v + offsets[p]).y.approx())
            for v in poly.vertices
        ])
    return placed


def render_surface_svg(s: TranslationSurface) -> str:
    """Polygon layout with matching numerals on re-glued edge pairs."""
    if not s.polygons:
        raise VeechKitError("nothing to render")
    placed = _layout(s)

    # non-tree gluings get labels; recompute the tree the same way _layout did
    seen = {0}
    tree_pairs = set()
    queue = [0]
    while queue:
        p = queue.pop(0)
        for e in range(len(s.polygons[p])):
            ref = EdgeRef(p, e)
            q, f = s.glued_to(ref)
            if q not in seen:
                seen.add(q)
                tree_pairs.add(frozenset((ref, EdgeRef(q, f))))
                queue.append(q)
    labels = {}
    counter = 0
    for a, b in sorted(s.gluings.items()):
        if a > b:
            continue
        pair = frozenset((a, b))
        if pair in tree_pairs:
            continue
        counter += 1
        labels[a] = roman(counter)
        labels[b] = roman(counter)

    xs = [x for poly in placed for x, _ in poly]
    ys = [y for poly in placed for _, y in poly]
    pad = 0.1 * max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    x0, y0 = min(xs) - pad, min(ys) - pad
    w, h = max(xs) - min(xs) + 2 * pad, max(ys) - min(ys) + 2 * pad

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(x0)} {_fmt(-y0 - h)} '
        f'{_fmt(w)} {_fmt(h)}" width="720">',
        '<g fill="none" stroke="black" stroke-width="0.01">',
    ]
    for pts in placed:
        coords = " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in pts)
        parts.append(f'<polygon points="{coords}" class="cell"/>')
    parts.append("</g>")
    parts.append('<g font-size="0.12" fill="black" stroke="none" text-anchor="middle">')
    for ref, text in sorted(labels.items()):
        p, e = ref
        pts = placed[p]
        ax, ay = pts[e]
        bx, by = pts[(e + 1) % len(pts)]
        parts.append(
            f'<text x="{_fmt((ax + bx) / 2)}" y="{_fmt(-(ay + by) / 2)}">{text}</text>'
        )
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts)


def render_domain_svg(sides: Dict[str, Geodesic], vertices: Dict[str, HPoint]) -> str:
    """Vertical lines and semicircular arcs of a half-plane polygon."""
    finite_x = []
    for g in sides.values():
        if g.is_vertical:
            finite_x.append(g.x0.approx())
        else:
            r = g.r2.approx() ** 0.5
            finite_x.extend([g.center.approx() - r, g.center.approx() + r])
    lo, hi = min(finite_x), max(finite_x)
    pad = 0.08 * (hi - lo)
    top = 0.45 * (hi - lo)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(lo - pad)} {_fmt(-top)} '
        f'{_fmt(hi - lo + 2 * pad)} {_fmt(top + pad)}" width="720">',
        f'<line x1="{_fmt(lo - pad)}" y1="0" x2="{_fmt(hi + pad)}" y2="0" '
        'stroke="gray" stroke-width="0.01"/>',
        '<g fill="none" stroke="black" stroke-width="0.02">',
    ]
    for name in sorted(sides):
        g = sides[name]
        if g.is_vertical:
            x = g.x0.approx()
            parts.append(
                f'<line class="side-vertical" x1="{_fmt(x)}" y1="0" '
                f'x2="{_fmt(x)}" y2="{_fmt(-top)}"/>'
            )
        else:
            r = g.r2.approx() ** 0.5
            c = g.center.approx()
            parts.append(
                f'<path class="side-arc" d="M {_fmt(c - r)} 0 A {_fmt(r)} {_fmt(r)} '
                f'0 0 1 {_fmt(c + r)} 0"/>'
            )
    parts.append("</g>")
    parts.append('<g font-size="0.35" fill="black" text-anchor="middle">')
    for name in sorted(vertices):
        v = vertices[name]
        if isinstance(v, BoundaryPoint):
            if v.is_infinity:
                x, y = (lo + hi) / 2, -top + 0.4
            else:
                x, y = v.x.approx(), 0.35
        else:
            x, y = v.re.approx(), -v.im.approx() - 0.15
        parts.append(f'<text x="{_fmt(x)}" y="{_fmt(y)}">{name}</text>')
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts)
