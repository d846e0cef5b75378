"""Directional cylinder decompositions of a translation surface.

A direction is periodic exactly when every separatrix leaving a cone point
closes up on a cone point; the surface then splits along those saddle
connections into flat cylinders.  Everything here is exact: the direction
is sheared to horizontal by a unimodular map, separatrices are traced with
field arithmetic, and moduli come out as field elements.

Lengths are reported in units where the normalized direction vector has
length 1, so modulus = height / circumference holds exactly and agrees
with the Euclidean modulus.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field as dfield
from fractions import Fraction
from functools import reduce
from math import gcd as _int_gcd
from typing import Dict, List, Optional, Set, Tuple

from .errors import (
    BudgetExceeded,
    IncommensurableModuli,
    MembershipFailed,
    NotParallelDecomposable,
    ZeroDirection,
)
from .field import FieldElem, Mat2, Vec2, is_rational_ratio
from .mesh import TriMesh
from . import surface as _surface

DEFAULT_BUDGET = 10_000


@dataclass(frozen=True)
class Direction:
    """Projective direction, scaled so its first nonzero coordinate is +1."""

    vector: Vec2

    @staticmethod
    def of(v: Vec2) -> "Direction":
        if not v:
            raise ZeroDirection("the zero vector does not define a direction")
        one = FieldElem.of(1, v.x.d)
        zero = FieldElem.of(0, v.x.d)
        if v.x:
            return Direction(Vec2(one, v.y / v.x))
        return Direction(Vec2(zero, one))

    @staticmethod
    def of_slope(s: FieldElem) -> "Direction":
        return Direction.of(Vec2(FieldElem.of(1, s.d), s))

    @staticmethod
    def horizontal(d: int = 3) -> "Direction":
        return Direction.of(Vec2.of(1, 0, d))

    @staticmethod
    def vertical(d: int = 3) -> "Direction":
        return Direction.of(Vec2.of(0, 1, d))

    @property
    def is_vertical(self) -> bool:
        return not self.vector.x

    def slope(self) -> Optional[FieldElem]:
        """dy/dx, or None for the vertical direction."""
        return None if self.is_vertical else self.vector.y

    def norm2(self) -> FieldElem:
        return self.vector.norm2()

    def transformed(self, mat: Mat2) -> "Direction":
        return Direction.of(mat.apply(self.vector))

    def __str__(self):
        return f"({self.vector.x}, {self.vector.y})"


@dataclass(frozen=True)
class Cylinder:
    """Maximal flat cylinder; modulus = height / circumference exactly."""

    circumference: FieldElem
    height: FieldElem
    modulus: FieldElem
    boundary_connections: int


@dataclass(frozen=True)
class CylinderDecomposition:
    direction: Direction
    cylinders: Tuple[Cylinder, ...]

    def moduli(self) -> List[FieldElem]:
        return [c.modulus for c in self.cylinders]

    def total_area(self) -> FieldElem:
        """Area in the surface metric: sum of c * h * |direction|^2."""
        v2 = self.direction.norm2()
        total = None
        for c in self.cylinders:
            term = c.circumference * c.height * v2
            total = term if total is None else total + term
        return total


def _shear_to_horizontal(s, direction: Direction):
    """Map the surface so ``direction`` becomes (1, 0), area preserved."""
    d = s.field_d
    if direction.is_vertical:
        mat = Mat2.of(0, 1, 1, 0, d)
    else:
        slope = direction.vector.y
        one = FieldElem.of(1, d)
        zero = FieldElem.of(0, d)
        mat = Mat2(one, zero, -slope, one)
    return _surface.apply_matrix(mat, s)


@dataclass
class _Connection:
    """One traced horizontal saddle connection on the sheared mesh."""

    chords: List[Tuple[int, Vec2, Vec2]] = dfield(default_factory=list)
    runs: List[Tuple[int, int]] = dfield(default_factory=list)
    crossings: List[Tuple[Tuple[int, int], FieldElem]] = dfield(default_factory=list)


class _Tracer:
    """Exact eastward ray tracing on the sheared mesh."""

    def __init__(self, mesh: TriMesh, budget: int):
        self.mesh = mesh
        self.orbits = mesh.vertex_orbits()
        self.orbit_of = mesh.orbit_of()
        self.turning = [mesh.orbit_turning(o) for o in self.orbits]
        self.budget = budget

    def singular_orbits(self) -> Set[int]:
        sing = {i for i, m in enumerate(self.turning) if m != 1}
        if not sing:
            sing = {0}  # no cone points (torus): one marked leaf stands in
        return sing

    def march(self, t: int, p: Vec2):
        """Exit of the eastward ray from boundary point p of triangle t.

        Returns ('vertex', v, q) or ('edge', e, nu, q), q the exit point."""
        mesh = self.mesh
        best = None
        for v in range(3):
            dv = mesh.point(t, v) - p
            if not dv.y and dv.x.sign() > 0:
                if best is None or dv.x < best[0]:
                    best = (dv.x, ("vertex", v, mesh.point(t, v)))
        for e in range(3):
            a = mesh.point(t, e)
            b = mesh.point(t, (e + 1) % 3)
            dy = b.y - a.y
            if not dy:
                continue
            nu = (p.y - a.y) / dy
            if nu.sign() <= 0 or (nu - 1).sign() >= 0:
                continue
            q = Vec2(a.x + nu * (b.x - a.x), p.y)
            mu = q.x - p.x
            if mu.sign() > 0 and (best is None or mu < best[0]):
                best = (mu, ("edge", e, nu, q))
        if best is None:
            raise AssertionError("eastward ray found no exit; corrupt geometry")
        return best[1]

    def enter_partner(self, t: int, e: int, nu: FieldElem):
        q, f = self.mesh.glue[(t, e)]
        a = self.mesh.point(q, f)
        vec = self.mesh.edge_vec(q, f)
        lam = 1 - nu
        return q, Vec2(a.x + lam * vec.x, a.y + lam * vec.y)

    def continuation_at(self, orbit_index: int):
        """How an eastward ray continues through a 2*pi vertex.

        Returns ('run', t, e) to follow edge (t, e), else ('corner', t, v)."""
        for (t, v) in self.orbits[orbit_index]:
            u, w = self.mesh.corner_rays(t, v)
            if not u.y and u.x.sign() > 0:
                return ("run", t, v)
            if u.y.sign() < 0 and w.y.sign() > 0:
                return ("corner", t, v)
        raise AssertionError("no corner of a flat vertex faces east")


def _separatrix_starts(tracer: _Tracer, singular: Set[int]):
    starts = []
    for idx in sorted(singular):
        for (t, v) in tracer.orbits[idx]:
            u, w = tracer.mesh.corner_rays(t, v)
            if not u.y and u.x.sign() > 0:
                starts.append(("run", t, v))
            elif u.y.sign() < 0 and w.y.sign() > 0:
                starts.append(("corner", t, v))
    return starts


def _trace_connection(tracer: _Tracer, start, singular: Set[int]) -> _Connection:
    mesh = tracer.mesh
    conn = _Connection()
    steps = 0
    mode, t, idx = start  # 'run' carries an edge, 'corner' a vertex
    point = None
    while True:
        steps += 1
        if steps > tracer.budget:
            raise BudgetExceeded(
                f"separatrix exceeded {tracer.budget} crossings; direction undetermined"
            )
        if mode == "run":
            conn.runs.append((t, idx))
            arrival = (t, (idx + 1) % 3)
        else:
            p = mesh.point(t, idx) if mode == "corner" else point
            exit_ = tracer.march(t, p)
            if exit_[0] == "edge":
                _, e, nu, q = exit_
                conn.chords.append((t, p, q))
                conn.crossings.append(((t, e), nu))
                t, point = tracer.enter_partner(t, e, nu)
                mode = "inside"
                continue
            conn.chords.append((t, p, exit_[2]))
            arrival = (t, exit_[1])
        orbit = tracer.orbit_of[arrival]
        if orbit in singular:
            return conn
        mode, t, idx = tracer.continuation_at(orbit)


def _leaf_holonomy(tracer: _Tracer, edge: Tuple[int, int], param: FieldElem) -> FieldElem:
    """Horizontal displacement of the closed regular leaf through an edge point."""
    mesh = tracer.mesh

    def normalize(slot, nu):
        # stand on the slot whose triangle lies east of the crossing point
        if mesh.edge_vec(*slot).y.sign() < 0:
            return slot, nu
        q, f = mesh.glue[slot]
        return (q, f), 1 - nu

    start = normalize(edge, param)
    slot, nu = start
    a = mesh.point(*slot)
    vec = mesh.edge_vec(*slot)
    t = slot[0]
    p = Vec2(a.x + nu * vec.x, a.y + nu * vec.y)
    total = FieldElem.of(0, p.x.d)
    steps = 0
    while True:
        steps += 1
        if steps > tracer.budget:
            raise BudgetExceeded("leaf tracing exceeded budget")
        exit_ = tracer.march(t, p)
        if exit_[0] == "vertex":
            v, q = exit_[1], exit_[2]
            total = total + (q.x - p.x)
            orbit = tracer.orbit_of[(t, v)]
            if tracer.turning[orbit] != 1:
                raise AssertionError("interior leaf hit a cone point")
            mode, t2, idx = tracer.continuation_at(orbit)
            while mode == "run":
                total = total + mesh.edge_vec(t2, idx).x
                arrival = (t2, (idx + 1) % 3)
                orbit = tracer.orbit_of[arrival]
                if tracer.turning[orbit] != 1:
                    raise AssertionError("interior leaf hit a cone point")
                mode, t2, idx = tracer.continuation_at(orbit)
            t, p = t2, mesh.point(t2, idx)
            continue
        _, e, nu2, q = exit_
        total = total + (q.x - p.x)
        cur = normalize((t, e), nu2)
        if cur == start:
            return total
        (t, e2), nu3 = cur
        a = mesh.point(t, e2)
        vec = mesh.edge_vec(t, e2)
        p = Vec2(a.x + nu3 * vec.x, a.y + nu3 * vec.y)


def decompose(s, direction, budget: int = DEFAULT_BUDGET) -> CylinderDecomposition:
    """Cylinder decomposition of the surface in the given direction.

    Raises BudgetExceeded when some separatrix fails to close within the
    crossing budget (the direction may simply not be periodic)."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    if not isinstance(direction, Direction):
        direction = Direction.of(direction)
    sheared = _shear_to_horizontal(s, direction)
    mesh = sheared.to_mesh()
    tracer = _Tracer(mesh, budget)
    singular = tracer.singular_orbits()
    connections = [
        _trace_connection(tracer, start, singular)
        for start in _separatrix_starts(tracer, singular)
    ]

    zero = FieldElem.of(0, s.field_d)
    one = FieldElem.of(1, s.field_d)

    chords_by_tri: Dict[int, Dict[FieldElem, int]] = {}
    cut_edges: Set[Tuple[int, int]] = set()
    crossings: Dict[Tuple[int, int], Set[FieldElem]] = {}
    for ci, conn in enumerate(connections):
        for (t, e) in conn.runs:
            cut_edges.add((t, e))
            cut_edges.add(mesh.glue[(t, e)])
        for (t, p, q) in conn.chords:
            level = chords_by_tri.setdefault(t, {})
            if p.y in level:
                raise AssertionError("two saddle connections share a chord level")
            level[p.y] = ci
        for (slot, nu) in conn.crossings:
            crossings.setdefault(slot, set()).add(nu)
            crossings.setdefault(mesh.glue[slot], set()).add(1 - nu)

    levels: Dict[int, List[FieldElem]] = {
        t: sorted(chords_by_tri.get(t, {})) for t in range(len(mesh.tris))
    }

    piece_id: Dict[Tuple[int, int], int] = {}
    piece_area2: List[FieldElem] = []
    for t in range(len(mesh.tris)):
        for j in range(len(levels[t]) + 1):
            piece_id[(t, j)] = len(piece_area2)
            lo = levels[t][j - 1] if j > 0 else None
            hi = levels[t][j] if j < len(levels[t]) else None
            piece_area2.append(_strip_area2(mesh, t, lo, hi))

    parent = list(range(len(piece_area2)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        parent[find(x)] = find(y)

    def slab(t: int, y: FieldElem) -> int:
        return bisect_left(levels[t], y)

    def upper_side(t: int, e: int) -> bool:
        return mesh.point(t, (e + 2) % 3).y > mesh.point(t, e).y

    def edge_intervals(t: int, e: int):
        params = sorted(crossings.get((t, e), set()) | {zero, one})
        return list(zip(params, params[1:]))

    seen_pairs = set()
    for (t, e), (q, f) in mesh.glue.items():
        key = frozenset(((t, e), (q, f)))
        if key in seen_pairs or (t, e) in cut_edges:
            seen_pairs.add(key)
            continue
        seen_pairs.add(key)
        vec = mesh.edge_vec(t, e)
        if not vec.y:
            up, down = ((t, e), (q, f)) if upper_side(t, e) else ((q, f), (t, e))
            union(piece_id[(up[0], 0)], piece_id[(down[0], len(levels[down[0]]))])
            continue
        a = mesh.point(t, e)
        a2 = mesh.point(q, f)
        vec2 = mesh.edge_vec(q, f)
        for lo_p, hi_p in edge_intervals(t, e):
            mid = (lo_p + hi_p) / 2
            y1 = a.y + mid * vec.y
            y2 = a2.y + (1 - mid) * vec2.y
            union(piece_id[(t, slab(t, y1))], piece_id[(q, slab(q, y2))])

    # one transversal seed interval per component, for the core-leaf trace
    seed_by_root: Dict[int, Tuple[Tuple[int, int], FieldElem]] = {}
    for (t, e) in sorted(mesh.glue):
        if (t, e) in cut_edges or not mesh.edge_vec(t, e).y:
            continue
        a = mesh.point(t, e)
        vec = mesh.edge_vec(t, e)
        for lo_p, hi_p in edge_intervals(t, e):
            mid = (lo_p + hi_p) / 2
            root = find(piece_id[(t, slab(t, a.y + mid * vec.y))])
            seed_by_root.setdefault(root, ((t, e), mid))

    comp_area2: Dict[int, FieldElem] = {}
    for i, area in enumerate(piece_area2):
        r = find(i)
        comp_area2[r] = comp_area2[r] + area if r in comp_area2 else area

    boundary_count: Dict[int, int] = {r: 0 for r in comp_area2}
    for conn in connections:
        if conn.chords:
            t, p, _q = conn.chords[0]
            idx = levels[t].index(p.y)
            above = find(piece_id[(t, idx + 1)])
            below = find(piece_id[(t, idx)])
        else:
            t, e = conn.runs[0]
            qf = mesh.glue[(t, e)]
            up, down = ((t, e), qf) if upper_side(t, e) else (qf, (t, e))
            above = find(piece_id[(up[0], 0)])
            below = find(piece_id[(down[0], len(levels[down[0]]))])
        boundary_count[above] += 1
        boundary_count[below] += 1

    v2 = direction.norm2()
    cylinders = []
    for r in sorted(comp_area2):
        if r not in seed_by_root:
            raise AssertionError("cylinder without a transversal edge crossing")
        edge, mid = seed_by_root[r]
        lam = _leaf_holonomy(tracer, edge, mid)
        area = comp_area2[r] / 2
        cylinders.append(
            Cylinder(
                circumference=lam,
                height=area / (lam * v2),
                modulus=area / (lam * lam * v2),
                boundary_connections=boundary_count[r],
            )
        )
    cylinders.sort(key=lambda c: (c.modulus, c.circumference))
    return CylinderDecomposition(direction, tuple(cylinders))


def _strip_area2(mesh: TriMesh, t: int, lo: Optional[FieldElem], hi: Optional[FieldElem]) -> FieldElem:
    """Twice the area of triangle t clipped to the band lo <= y <= hi."""
    pts = list(mesh.tris[t])
    if lo is not None:
        pts = _clip_half(pts, lo, keep_above=True)
    if hi is not None:
        pts = _clip_half(pts, hi, keep_above=False)
    if len(pts) < 3:
        raise AssertionError("empty piece; cut levels are inconsistent")
    total = None
    for i in range(len(pts)):
        term = pts[i].cross(pts[(i + 1) % len(pts)])
        total = term if total is None else total + term
    return total


def _clip_half(pts: List[Vec2], y0: FieldElem, keep_above: bool) -> List[Vec2]:
    out: List[Vec2] = []
    n = len(pts)
    for i in range(n):
        cur, nxt = pts[i], pts[(i + 1) % n]
        cin = (cur.y >= y0) if keep_above else (cur.y <= y0)
        nin = (nxt.y >= y0) if keep_above else (nxt.y <= y0)
        if cin:
            out.append(cur)
        if cin != nin:
            s = (y0 - cur.y) / (nxt.y - cur.y)
            out.append(Vec2(cur.x + s * (nxt.x - cur.x), y0))
    return out


def commensurability_class(dec: CylinderDecomposition):
    """gcd of the moduli and the integer multipliers, or None.

    The gcd is the largest alpha with every modulus / alpha a positive
    integer; it exists exactly when all modulus ratios are rational."""
    moduli = dec.moduli()
    if not moduli:
        raise ValueError("empty decomposition")
    base = moduli[0]
    ratios = []
    for m in moduli:
        r = is_rational_ratio(m, base)
        if r is None:
            return None
        ratios.append(r)

    def frac_gcd(a: Fraction, b: Fraction) -> Fraction:
        return Fraction(
            _int_gcd(a.numerator * b.denominator, b.numerator * a.denominator),
            a.denominator * b.denominator,
        )

    g = reduce(frac_gcd, ratios)
    alpha = base * g
    multipliers = [int(r / g) for r in ratios]
    return alpha, multipliers


def parabolic_for_direction(s, direction, budget: int = DEFAULT_BUDGET) -> Mat2:
    """The primitive parabolic fixing the direction, built from Veech's lemma.

    With alpha the gcd of the moduli and v the direction vector, this is
    I + (1/alpha) [[-vx vy, vx^2], [-vy^2, vx vy]] / |v|^2; membership is
    certified by canonical-form equality before returning."""
    if not isinstance(direction, Direction):
        direction = Direction.of(direction)
    try:
        dec = decompose(s, direction, budget)
    except BudgetExceeded as exc:
        raise NotParallelDecomposable(
            f"no decomposition found in direction {direction} within budget"
        ) from exc
    cls = commensurability_class(dec)
    if cls is None:
        raise IncommensurableModuli(
            f"moduli in direction {direction} have irrational ratios"
        )
    alpha, _ = cls
    v = direction.vector
    c = alpha.inverse() / v.norm2()
    one = FieldElem.of(1, v.x.d)
    mat = Mat2(
        one - c * v.x * v.y, c * v.x * v.x,
        -c * v.y * v.y, one + c * v.x * v.y,
    )
    if not _surface.is_translation_equivalent(_surface.apply_matrix(mat, s), s):
        raise MembershipFailed(f"derived parabolic {mat} does not preserve the surface")
    return mat


def width_ratio_invariant(dec: CylinderDecomposition) -> List[FieldElem]:
    """Sorted multiset of pairwise cylinder-width ratios >= 1.

    The width of a cylinder is its extent across the core curves (the
    height); these ratios are affine invariants of the direction."""
    if not dec.cylinders:
        raise ValueError("empty decomposition")
    widths = [c.height for c in dec.cylinders]
    out = []
    for i in range(len(widths)):
        for j in range(i + 1, len(widths)):
            r = widths[i] / widths[j]
            if r < 1:
                r = r.inverse()
            out.append(r)
    out.sort()
    return out
