"""Triangulated working form of a glued-polygon surface.

Everything that walks the surface (cone angles, separatrix tracing,
Delaunay canonicalization) runs on this form: a list of coordinate
triangles plus an edge-pairing involution.  Triangle corners are always
strictly convex, which keeps the sector tests one-liners.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from fractions import Fraction
from typing import Dict, List, Tuple

from .errors import InvalidSurface
from .field import FieldElem, Vec2

Corner = Tuple[int, int]  # (triangle index, vertex index 0..2)
EdgeSlot = Tuple[int, int]  # (triangle index, edge index 0..2)


def triangle_area2(p0: Vec2, p1: Vec2, p2: Vec2) -> FieldElem:
    """Twice the signed area of the triangle (positive when ccw)."""
    return (p1 - p0).cross(p2 - p0)


def _point_in_triangle_closed(p: Vec2, a: Vec2, b: Vec2, c: Vec2) -> bool:
    s0 = (b - a).cross(p - a).sign()
    s1 = (c - b).cross(p - b).sign()
    s2 = (a - c).cross(p - c).sign()
    return s0 >= 0 and s1 >= 0 and s2 >= 0


def ear_clip(vertices: List[Vec2]) -> List[Tuple[int, int, int]]:
    """Triangulate a simple ccw polygon; returns vertex-index triples."""
    n = len(vertices)
    idx = list(range(n))
    out = []
    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 4 * n * n:
            raise InvalidSurface("polygon triangulation did not terminate; polygon may not be simple")
        m = len(idx)
        clipped = False
        for j in range(m):
            i0, i1, i2 = idx[(j - 1) % m], idx[j], idx[(j + 1) % m]
            a, b, c = vertices[i0], vertices[i1], vertices[i2]
            if triangle_area2(a, b, c).sign() <= 0:
                continue
            if any(
                _point_in_triangle_closed(vertices[k], a, b, c)
                for k in idx
                if k not in (i0, i1, i2)
            ):
                continue
            out.append((i0, i1, i2))
            idx.pop(j)
            clipped = True
            break
        if not clipped:
            raise InvalidSurface("no ear found; polygon is not simple and ccw")
    out.append(tuple(idx))
    return out


@dataclass
class TriMesh:
    """Coordinate triangles glued along translation-matched edges.

    ``tris[t]`` is a (p0, p1, p2) ccw coordinate triple; edge i of a
    triangle runs from vertex i to vertex i+1 mod 3.  ``glue`` is a
    fixed-point-free involution on edge slots, and glued edges carry
    opposite edge vectors.
    """

    tris: List[Tuple[Vec2, Vec2, Vec2]]
    glue: Dict[EdgeSlot, EdgeSlot]
    _orbit_cache: dict = dfield(default_factory=dict, repr=False)

    # -- geometry accessors ---------------------------------------------------

    def point(self, t: int, v: int) -> Vec2:
        return self.tris[t][v % 3]

    def edge_vec(self, t: int, e: int) -> Vec2:
        return self.tris[t][(e + 1) % 3] - self.tris[t][e]

    def area2(self, t: int) -> FieldElem:
        p0, p1, p2 = self.tris[t]
        return triangle_area2(p0, p1, p2)

    def total_area(self) -> FieldElem:
        total = self.area2(0)
        for t in range(1, len(self.tris)):
            total = total + self.area2(t)
        return total / 2

    def corner_rays(self, t: int, v: int) -> Tuple[Vec2, Vec2]:
        """Rays (u, w) from corner v along its two sides; ccw sweep u -> w."""
        u = self.edge_vec(t, v)
        w = -self.edge_vec(t, (v - 1) % 3)
        return u, w

    # -- vertex orbits ----------------------------------------------------------

    def next_corner(self, c: Corner) -> Corner:
        """Adjacent corner counterclockwise around the same surface vertex."""
        t, v = c
        q, f = self.glue[(t, (v - 1) % 3)]
        return (q, f)

    def vertex_orbits(self) -> List[List[Corner]]:
        """Corner cycles around each surface vertex, in ccw walk order."""
        if "orbits" in self._orbit_cache:
            return self._orbit_cache["orbits"]
        seen = set()
        orbits = []
        for t in range(len(self.tris)):
            for v in range(3):
                if (t, v) in seen:
                    continue
                cycle = []
                c = (t, v)
                while c not in seen:
                    seen.add(c)
                    cycle.append(c)
                    c = self.next_corner(c)
                orbits.append(cycle)
        self._orbit_cache["orbits"] = orbits
        return orbits

    def orbit_of(self) -> Dict[Corner, int]:
        if "index" not in self._orbit_cache:
            index = {}
            for i, cyc in enumerate(self.vertex_orbits()):
                for c in cyc:
                    index[c] = i
            self._orbit_cache["index"] = index
        return self._orbit_cache["index"]

    def orbit_turning(self, orbit: List[Corner]) -> int:
        """Total angle around the vertex as a multiple of 2*pi.

        Counts how often the ccw ray cycle crosses the +x direction; exact,
        and independent of any angle being on a recognizable grid."""
        rays = [self.corner_rays(t, v)[0] for (t, v) in orbit]

        def upper(r: Vec2) -> bool:
            s = r.y.sign()
            return s > 0 or (s == 0 and r.x.sign() > 0)

        m = 0
        for i, r in enumerate(rays):
            if not upper(r) and upper(rays[(i + 1) % len(rays)]):
                m += 1
        if m == 0:
            raise InvalidSurface("vertex with zero total angle")
        return m

    def orbit_turnings(self) -> List[int]:
        return [self.orbit_turning(o) for o in self.vertex_orbits()]

    # -- validation ----------------------------------------------------------------

    def check(self) -> None:
        slots = {(t, e) for t in range(len(self.tris)) for e in range(3)}
        if set(self.glue) != slots:
            raise InvalidSurface("gluing must pair every edge slot")
        for s, p in self.glue.items():
            if p == s:
                raise InvalidSurface(f"edge {s} glued to itself")
            if self.glue.get(p) != s:
                raise InvalidSurface(f"gluing is not an involution at {s}")
            vs = self.edge_vec(*s)
            vp = self.edge_vec(*p)
            if vs + vp:
                raise InvalidSurface(f"glued edges {s} and {p} are not opposite translates")
        for t in range(len(self.tris)):
            if self.area2(t).sign() <= 0:
                raise InvalidSurface(f"triangle {t} is not positively oriented")
        # connectivity
        seen = {0}
        stack = [0]
        while stack:
            t = stack.pop()
            for e in range(3):
                q = self.glue[(t, e)][0]
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        if len(seen) != len(self.tris):
            raise InvalidSurface("surface is not connected")

    def genus(self) -> int:
        v = len(self.vertex_orbits())
        e = 3 * len(self.tris) // 2
        f = len(self.tris)
        chi = v - e + f
        if chi % 2:
            raise InvalidSurface("odd Euler characteristic")
        return (2 - chi) // 2

    def clone(self) -> "TriMesh":
        return TriMesh(list(self.tris), dict(self.glue))


def mesh_from_polygons(
    polygons: List[List[Vec2]],
    gluings: Dict[Tuple[int, int], Tuple[int, int]],
) -> Tuple[TriMesh, Dict[Tuple[int, int], EdgeSlot]]:
    """Triangulate glued polygons; also maps polygon edges to mesh slots."""
    tris: List[Tuple[Vec2, Vec2, Vec2]] = []
    glue: Dict[EdgeSlot, EdgeSlot] = {}
    boundary: Dict[Tuple[int, int], EdgeSlot] = {}
    for p, verts in enumerate(polygons):
        n = len(verts)
        triples = [(0, i, i + 1) for i in range(1, n - 1)] if _is_convex(verts) else ear_clip(verts)
        base = len(tris)
        # locate each polygon boundary edge (j, j+1) among the new triangles
        local_edges = {}
        for ti, (i0, i1, i2) in enumerate(triples):
            tris.append((verts[i0], verts[i1], verts[i2]))
            for e, (a, b) in enumerate(((i0, i1), (i1, i2), (i2, i0))):
                local_edges.setdefault((a, b), []).append((base + ti, e))
        for j in range(n):
            a, b = j, (j + 1) % n
            slot = local_edges.get((a, b))
            if not slot or len(slot) != 1:
                raise InvalidSurface(f"triangulation lost boundary edge ({p},{j})")
            boundary[(p, j)] = slot[0]
        # interior diagonals appear once in each direction
        border = {(j, (j + 1) % n) for j in range(n)}
        for (a, b), slots in local_edges.items():
            if (a, b) in border:
                continue
            rev = local_edges.get((b, a))
            if not rev or len(slots) != 1 or len(rev) != 1:
                raise InvalidSurface(f"bad diagonal ({a},{b}) in polygon {p}")
            glue[slots[0]] = rev[0]
    for eref, slot in boundary.items():
        partner = gluings[eref]
        glue[slot] = boundary[partner]
    mesh = TriMesh(tris, glue)
    return mesh, boundary


def _is_convex(verts: List[Vec2]) -> bool:
    n = len(verts)
    for i in range(n):
        a, b, c = verts[i], verts[(i + 1) % n], verts[(i + 2) % n]
        if (b - a).cross(c - b).sign() <= 0:
            return False
    return True
