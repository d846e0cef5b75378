"""Translation surfaces from glued planar polygons.

Includes the reflection-group unfolding of a rational triangle, cone-point
and genus computation, affine images, and a canonical form that decides
translation equivalence (equality up to cut-and-paste and relabeling).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

from . import canonical
from .errors import (
    InvalidSurface,
    InvalidTriangle,
    NotUnimodular,
    UnsupportedField,
)
from .field import AngleMultiple, FieldElem, Mat2, Vec2, tan_of_twelfths
from .mesh import TriMesh, mesh_from_polygons, triangle_area2


class EdgeRef(NamedTuple):
    polygon_index: int
    edge_index: int


def _segments_meet(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool:
    """Closed-segment intersection test, exact."""
    d1 = (d - c).cross(a - c).sign()
    d2 = (d - c).cross(b - c).sign()
    d3 = (b - a).cross(c - a).sign()
    d4 = (b - a).cross(d - a).sign()
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True

    def on_segment(p, q, r):  # r collinear with pq: is r within the box?
        return (
            min(p.x, q.x) <= r.x <= max(p.x, q.x)
            and min(p.y, q.y) <= r.y <= max(p.y, q.y)
        )

    if d1 == 0 and on_segment(c, d, a):
        return True
    if d2 == 0 and on_segment(c, d, b):
        return True
    if d3 == 0 and on_segment(a, b, c):
        return True
    if d4 == 0 and on_segment(a, b, d):
        return True
    return False


@dataclass(frozen=True)
class PlanarPolygon:
    """Simple polygon with counterclockwise vertices and positive area."""

    vertices: Tuple[Vec2, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        n = len(self.vertices)
        if n < 3:
            raise InvalidSurface("polygon needs at least 3 vertices")
        if self.signed_area2().sign() <= 0:
            raise InvalidSurface("polygon must have positive signed area (ccw)")
        for i in range(n):
            a, b, c = self.vertices[i], self.vertices[(i + 1) % n], self.vertices[(i + 2) % n]
            if not (b - a) or not (c - b):
                raise InvalidSurface("polygon has a repeated vertex")
            if (b - a).cross(c - b).sign() == 0:
                raise InvalidSurface("polygon has a degenerate (collinear) corner")
        for i in range(n):
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                if _segments_meet(
                    self.vertices[i], self.vertices[(i + 1) % n],
                    self.vertices[j], self.vertices[(j + 1) % n],
                ):
                    raise InvalidSurface(f"polygon edges {i} and {j} intersect")

    def __len__(self):
        return len(self.vertices)

    def edge_vec(self, i: int) -> Vec2:
        n = len(self.vertices)
        return self.vertices[(i + 1) % n] - self.vertices[i]

    def signed_area2(self) -> FieldElem:
        total = None
        v = self.vertices
        for i in range(len(v)):
            term = v[i].cross(v[(i + 1) % len(v)])
            total = term if total is None else total + term
        return total

    def area(self) -> FieldElem:
        return self.signed_area2() / 2

    def translate(self, offset: Vec2) -> "PlanarPolygon":
        return PlanarPolygon(tuple(p + offset for p in self.vertices))


class TranslationSurface:
    """Polygons with a translation-matched edge pairing."""

    def __init__(self, polygons: Iterable[PlanarPolygon],
                 gluings: Dict[EdgeRef, EdgeRef], validate: bool = True):
        self.polygons: Tuple[PlanarPolygon, ...] = tuple(polygons)
        self._gluings = {EdgeRef(*k): EdgeRef(*v) for k, v in gluings.items()}
        self._cache: dict = {}
        if validate:
            self._validate()

    @property
    def gluings(self) -> Dict[EdgeRef, EdgeRef]:
        return dict(self._gluings)

    def glued_to(self, ref: EdgeRef) -> EdgeRef:
        return self._gluings[EdgeRef(*ref)]

    @property
    def field_d(self) -> int:
        return self.polygons[0].vertices[0].d

    def num_edges(self) -> int:
        return sum(len(p) for p in self.polygons) // 2

    def area(self) -> FieldElem:
        total = self.polygons[0].area()
        for p in self.polygons[1:]:
            total = total + p.area()
        return total

    def _validate(self):
        refs = {
            EdgeRef(p, e)
            for p in range(len(self.polygons))
            for e in range(len(self.polygons[p]))
        }
        if set(self._gluings) != refs:
            raise InvalidSurface("gluing must pair every edge exactly once")
        for ref, partner in self._gluings.items():
            if partner not in refs:
                raise InvalidSurface(f"gluing target {partner} out of range")
            if partner == ref:
                raise InvalidSurface(f"edge {ref} glued to itself")
            if self._gluings[partner] != ref:
                raise InvalidSurface(f"gluing is not an involution at {ref}")
            v = self.polygons[ref.polygon_index].edge_vec(ref.edge_index)
            w = self.polygons[partner.polygon_index].edge_vec(partner.edge_index)
            if v + w:
                raise InvalidSurface(
                    f"glued edges {ref} and {partner} are not opposite translates"
                )
        seen = {0}
        stack = [0]
        while stack:
            p = stack.pop()
            for e in range(len(self.polygons[p])):
                q = self._gluings[EdgeRef(p, e)].polygon_index
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        if len(seen) != len(self.polygons):
            raise InvalidSurface("surface is not connected")

    def to_mesh(self) -> TriMesh:
        if "mesh" not in self._cache:
            polys = [list(p.vertices) for p in self.polygons]
            glue = {tuple(k): tuple(v) for k, v in self._gluings.items()}
            mesh, _ = mesh_from_polygons(polys, glue)
            self._cache["mesh"] = mesh
        return self._cache["mesh"]

    def canonical_code(self):
        if "code" not in self._cache:
            self._cache["code"] = canonical.canonical_mesh_code(self.to_mesh())
        return self._cache["code"]

    def __eq__(self, other):
        if not isinstance(other, TranslationSurface):
            return NotImplemented
        return (
            self.polygons == other.polygons
            and self._gluings == other._gluings
        )

    def __hash__(self):
        return hash((self.polygons, frozenset(self._gluings.items())))

    def __repr__(self):
        return f"TranslationSurface({len(self.polygons)} polygons, area {self.area()})"


@dataclass(frozen=True)
class ConePointReport:
    """Cone angles with multiplicities, plus genus and polygon count."""

    cone_angles: Tuple[Tuple[AngleMultiple, int], ...]
    genus: int
    num_polygons: int

    def singular(self) -> Tuple[Tuple[AngleMultiple, int], ...]:
        return tuple((a, m) for a, m in self.cone_angles if a.k != 2)


# -- unfolding ---------------------------------------------------------------------


def _triangle_vertices(p1: int, p2: int, p3: int, n: int) -> Tuple[Vec2, Vec2, Vec2]:
    """Place the (p1, p2, p3)*pi/n triangle with the p1-p3 side on the x-axis.

    The p1 corner sits at the origin, the p3 corner at (1, 0), and the p2
    corner above.  This frame pins every downstream constant: for the
    (1, 4, 7)/12 triangle it makes the horizontal direction the one whose
    cylinder moduli pair up as half/double."""
    step = 12 // n
    ta = tan_of_twelfths(p1 * step)
    tb = tan_of_twelfths(p3 * step)
    v0 = Vec2.of(0, 0)
    v1 = Vec2.of(1, 0)
    if ta is None:  # right angle at the origin
        apex = Vec2(FieldElem.of(0), tb)
    elif tb is None:  # right angle at (1, 0)
        apex = Vec2(FieldElem.of(1), ta)
    else:
        x = tb / (ta + tb)
        apex = Vec2(x, ta * x)
    return v0, v1, apex


def unfold_triangle(p1: int, p2: int, p3: int, n: int) -> TranslationSurface:
    """Unfold the triangle with angles (p1, p2, p3)*pi/n across its sides.

    Returns one polygon per element of the dihedral group generated by the
    three side reflections, glued along matching reflected edges."""
    if min(p1, p2, p3) < 1 or p1 + p2 + p3 != n:
        raise InvalidTriangle(f"angles ({p1},{p2},{p3})/{n} must be positive and sum to pi")
    if n < 2 or 12 % n != 0:
        raise UnsupportedField(
            f"denominator {n} does not divide 12; coordinates leave Q(sqrt(3))"
        )
    verts = _triangle_vertices(p1, p2, p3, n)
    sides = [verts[(i + 1) % 3] - verts[i] for i in range(3)]
    refl = [Mat2.reflection_across(v) for v in sides]

    ident = Mat2.identity()
    index = {ident: 0}
    elements = [ident]
    queue = [ident]
    while queue:
        g = queue.pop(0)
        for r in refl:
            h = g * r
            if h not in index:
                index[h] = len(elements)
                elements.append(h)
                queue.append(h)

    def slot(g: Mat2, e: int) -> int:
        return e if g.det() == 1 else (1 - e) % 3

    polygons = []
    for g in elements:
        imgs = [g.apply(v) for v in verts]
        if g.det() == 1:
            polygons.append(PlanarPolygon(tuple(imgs)))
        else:
            polygons.append(PlanarPolygon((imgs[2], imgs[1], imgs[0])))

    gluings: Dict[EdgeRef, EdgeRef] = {}
    for g in elements:
        for e in range(3):
            h = g * refl[e]
            a = EdgeRef(index[g], slot(g, e))
            b = EdgeRef(index[h], slot(h, e))
            gluings[a] = b
    return TranslationSurface(polygons, gluings)


def cone_points(s: TranslationSurface) -> ConePointReport:
    """Cone angle of every vertex orbit (as a multiple of 2*pi) and genus."""
    mesh = s.to_mesh()
    turnings = mesh.orbit_turnings()
    counts: Dict[int, int] = {}
    for m in turnings:
        counts[m] = counts.get(m, 0) + 1
    angles = tuple(
        (AngleMultiple(Fraction(2 * m)), counts[m]) for m in sorted(counts, reverse=True)
    )
    return ConePointReport(angles, mesh.genus(), len(s.polygons))


def apply_matrix(mat: Mat2, s: TranslationSurface) -> TranslationSurface:
    """The surface with every chart postcomposed by ``mat`` (det must be +-1)."""
    det = mat.det()
    if det != 1 and det != -1:
        raise NotUnimodular(f"determinant {det} is not +-1")
    flip = det == -1
    polygons = []
    for poly in s.polygons:
        imgs = [mat.apply(v) for v in poly.vertices]
        if flip:
            imgs.reverse()
        polygons.append(PlanarPolygon(tuple(imgs)))
    gluings: Dict[EdgeRef, EdgeRef] = {}

    def remap(ref: EdgeRef) -> EdgeRef:
        if not flip:
            return ref
        n = len(s.polygons[ref.polygon_index])
        return EdgeRef(ref.polygon_index, (n - 2 - ref.edge_index) % n)

    for a, b in s.gluings.items():
        gluings[remap(a)] = remap(b)
    return TranslationSurface(polygons, gluings)


def canonical_form(s: TranslationSurface) -> TranslationSurface:
    """Canonical Delaunay presentation; equal iff translation-equivalent.

    Marked points with angle exactly 2*pi are dropped (one survives on a
    torus), so equivalence is that of the underlying metric surfaces."""
    code = s.canonical_code()
    mesh = canonical.mesh_from_code(code, s.field_d)
    polygons = [PlanarPolygon(tri) for tri in mesh.tris]
    gluings = {EdgeRef(*k): EdgeRef(*v) for k, v in mesh.glue.items()}
    out = TranslationSurface(polygons, gluings)
    out._cache["code"] = code
    return out


def is_translation_equivalent(s1: TranslationSurface, s2: TranslationSurface) -> bool:
    """True when the surfaces differ by cut-and-paste plus relabeling."""
    if s1.field_d != s2.field_d:
        raise ValueError("surfaces live over different quadratic fields")
    return s1.canonical_code() == s2.canonical_code()


def euclidean_isometry_group(s: TranslationSurface) -> List[Mat2]:
    """All orthogonal matrices over the field that preserve the surface.

    Candidates send one shortest Delaunay edge to another (one rotation and
    one reflection per ordered pair); each is certified by translation
    equivalence.  The result is a finite group, returned sorted."""
    code = s.canonical_code()
    mesh = canonical.mesh_from_code(code, s.field_d)
    vectors = set()
    for t in range(len(mesh.tris)):
        for e in range(3):
            vectors.add(mesh.edge_vec(t, e))
    shortest = min(v.norm2() for v in vectors)
    short = [v for v in vectors if v.norm2() == shortest]

    candidates = set()
    for u in short:
        n2 = u.norm2()
        mirror = Mat2.reflection_across(u)
        for w in short:
            c = u.dot(w) / n2
            sn = u.cross(w) / n2
            rot = Mat2(c, -sn, sn, c)
            candidates.add(rot)
            candidates.add(rot * mirror)

    group = []
    for mat in candidates:
        if apply_matrix(mat, s).canonical_code() == code:
            group.append(mat)
    group.sort(key=lambda m: tuple((x.a, x.b) for x in m.entries()))
    return group
