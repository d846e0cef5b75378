"""Canonical Delaunay presentation of a triangulated flat surface.

The canonical form is computed in four steps: erase marked points whose
cone angle is exactly 2*pi (down to a single vertex on a torus), flip to
a Delaunay triangulation with exact in-circle tests, re-triangulate each
maximal cocircular cell by a fan from a canonically chosen corner, and
finally relabel by the lexicographically smallest breadth-first encoding
over all (base triangle, base edge) choices.  Two surfaces are
translation-equivalent exactly when their codes agree.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import InvalidSurface
from .field import FieldElem, Vec2
from .mesh import EdgeSlot, TriMesh, triangle_area2

_MAX_FLIP_ROUNDS = 200_000


def _vec_key(v: Vec2):
    return (v.x.a, v.x.b, v.y.a, v.y.b)


def _incircle(x: Vec2, y: Vec2, z: Vec2, w: Vec2) -> int:
    """Sign of the in-circle determinant: +1 when w is strictly inside the
    circumcircle of the ccw triangle (x, y, z)."""
    ax, ay = x.x - w.x, x.y - w.y
    bx, by = y.x - w.x, y.y - w.y
    cx, cy = z.x - w.x, z.y - w.y
    a2 = ax * ax + ay * ay
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    det = (
        a2 * (bx * cy - by * cx)
        - b2 * (ax * cy - ay * cx)
        + c2 * (ax * by - ay * bx)
    )
    return det.sign()


def _quad(mesh: TriMesh, t: int, e: int):
    """Develop the two triangles adjacent to edge (t, e) in t's chart.

    Returns (q, f, X, Y, Z, W) where the shared edge runs X -> Y, Z is the
    third corner of t and W the third corner of the partner triangle."""
    q, f = mesh.glue[(t, e)]
    x = mesh.point(t, e)
    y = mesh.point(t, (e + 1) % 3)
    z = mesh.point(t, (e + 2) % 3)
    w = x + mesh.edge_vec(q, (f + 1) % 3)
    return q, f, x, y, z, w


def _flip(mesh: TriMesh, t: int, e: int) -> None:
    """Replace diagonal (t, e) of its quad by the opposite one, in place."""
    q, f, x, y, z, w = _quad(mesh, t, e)
    moves = {
        (q, (f + 1) % 3): (t, 0),
        (t, (e + 2) % 3): (t, 2),
        (q, (f + 2) % 3): (q, 0),
        (t, (e + 1) % 3): (q, 1),
    }
    partners = {}
    for old, new in moves.items():
        p = mesh.glue[old]
        partners[new] = moves.get(p, p)
    mesh.tris[t] = (x, w, z)
    mesh.tris[q] = (w, y, z)
    for new, p in partners.items():
        mesh.glue[new] = p
        mesh.glue[p] = new
    mesh.glue[(t, 1)] = (q, 2)
    mesh.glue[(q, 2)] = (t, 1)
    mesh._orbit_cache.clear()


def _flip_is_valid(mesh: TriMesh, t: int, e: int) -> bool:
    """True when flipping (t, e) produces two positively oriented triangles."""
    _, _, x, y, z, w = _quad(mesh, t, e)
    return (
        triangle_area2(x, w, z).sign() > 0
        and triangle_area2(w, y, z).sign() > 0
    )


def delaunay_flip(mesh: TriMesh) -> None:
    """Flip to a Delaunay triangulation (strict flips only), in place."""
    pending = [(t, e) for t in range(len(mesh.tris)) for e in range(3)]
    rounds = 0
    while pending:
        rounds += 1
        if rounds > _MAX_FLIP_ROUNDS:
            raise InvalidSurface("Delaunay flipping did not terminate")
        t, e = pending.pop()
        q, f, x, y, z, w = _quad(mesh, t, e)
        if _incircle(x, y, z, w) > 0:
            _flip(mesh, t, e)
            pending.extend([(t, 0), (t, 2), (q, 0), (q, 1)])


# -- erasing flat marked points ------------------------------------------------


def _erase_vertex(mesh: TriMesh, orbit: List[Tuple[int, int]]) -> TriMesh:
    """Remove one 2*pi vertex by degree-reducing flips, compacting triangles."""
    work = mesh.clone()
    cycle = list(orbit)
    guard = 0
    while len(cycle) > 3:
        guard += 1
        if guard > 10 * len(cycle) + 1000:
            raise InvalidSurface("vertex erasure did not terminate")
        flipped = False
        at_vertex = set(cycle)
        for (t, v) in cycle:
            if not _flip_is_valid(work, t, v):
                continue
            # flipping the out-edge of corner (t, v) must strictly lower the
            # corner count at this vertex (loop edges and loops in the link
            # can otherwise stall the reduction)
            q, f = work.glue[(t, v)]
            removed = 1 + ((t, (v + 1) % 3) in at_vertex)
            added = ((t, (v + 2) % 3) in at_vertex) + ((q, (f + 2) % 3) in at_vertex)
            if removed <= added:
                continue
            _flip(work, t, v)
            cycle = _orbit_through(work, (t, 0))
            flipped = True
            break
        if not flipped:
            if len(cycle) == 4:
                return _erase_degree4(work, cycle)
            raise InvalidSurface("cannot reduce vertex degree; star is degenerate")
    return _remove_degree3(work, cycle)


def _orbit_through(mesh: TriMesh, corner) -> List[Tuple[int, int]]:
    cycle = []
    c = corner
    while True:
        cycle.append(c)
        c = mesh.next_corner(c)
        if c == corner:
            return cycle


def _star_development(mesh: TriMesh, cycle):
    """Link points w_0..w_{k-1} of a vertex star, developed in one chart."""
    t0, v0 = cycle[0]
    center = mesh.point(t0, v0)
    links = []
    for (t, v) in cycle:
        tau = center - mesh.point(t, v)
        links.append(mesh.point(t, (v + 1) % 3) + tau)
    return center, links


def _replace_triangles(mesh: TriMesh, dead: List[int], new_tris, new_glue_local,
                       outer_map: Dict[EdgeSlot, EdgeSlot]) -> TriMesh:
    """Rebuild a mesh with ``dead`` triangles replaced by ``new_tris``.

    ``new_glue_local`` glues among new triangles (indices into new_tris);
    ``outer_map`` sends old boundary slots of the dead region to new slots
    (indices into new_tris)."""
    dead_set = set(dead)
    index = {}
    tris = []
    for t in range(len(mesh.tris)):
        if t not in dead_set:
            index[t] = len(tris)
            tris.append(mesh.tris[t])
    new_base = len(tris)
    tris.extend(new_tris)

    def remap(slot: EdgeSlot) -> EdgeSlot:
        t, e = slot
        if t in dead_set:
            nt, ne = outer_map[slot]
            return (new_base + nt, ne)
        return (index[t], e)

    glue = {}
    for (t, e), (q, f) in mesh.glue.items():
        if t in dead_set and (t, e) not in outer_map:
            continue  # interior edge of the dead region
        if q in dead_set and (q, f) not in outer_map:
            continue
        a, b = remap((t, e)), remap((q, f))
        glue[a] = b
        glue[b] = a
    for (i, e), (j, f) in new_glue_local.items():
        glue[(new_base + i, e)] = (new_base + j, f)
    return TriMesh(tris, glue)


def _remove_degree3(mesh: TriMesh, cycle) -> TriMesh:
    center, links = _star_development(mesh, cycle)
    w0, w1, w2 = links
    if triangle_area2(w0, w1, w2).sign() <= 0:
        raise InvalidSurface("degenerate link triangle while erasing vertex")
    dead = [t for (t, v) in cycle]
    outer_map = {}
    for i, (t, v) in enumerate(cycle):
        outer_map[(t, (v + 1) % 3)] = (0, i)  # link edge w_i -> w_{i+1}
    return _replace_triangles(mesh, dead, [(w0, w1, w2)], {}, outer_map)


def _erase_degree4(mesh: TriMesh, cycle) -> TriMesh:
    center, links = _star_development(mesh, cycle)
    w = links
    total = triangle_area2(w[0], w[1], w[2]) + triangle_area2(w[0], w[2], w[3])
    star_area = None
    for t, v in cycle:
        a = mesh.area2(t)
        star_area = a if star_area is None else star_area + a
    for d0, d1, d2, d3 in ((0, 1, 2, 3), (1, 2, 3, 0)):
        t1 = triangle_area2(w[d0], w[d1], w[d2])
        t2 = triangle_area2(w[d0], w[d2], w[d3])
        if t1.sign() > 0 and t2.sign() > 0 and t1 + t2 == star_area:
            dead = [t for (t, v) in cycle]
            outer_map = {}
            tri_of_link = {d0: 0, d1: 0, d2: 1, d3: 1}
            slot_of_link = {d0: 0, d1: 1, d2: 1, d3: 2}
            for i, (t, v) in enumerate(cycle):
                outer_map[(t, (v + 1) % 3)] = (tri_of_link[i], slot_of_link[i])
            new_tris = [(w[d0], w[d1], w[d2]), (w[d0], w[d2], w[d3])]
            new_glue = {(0, 2): (1, 0), (1, 0): (0, 2)}
            return _replace_triangles(mesh, dead, new_tris, new_glue, outer_map)
    raise InvalidSurface("cannot remove degree-4 vertex; link is degenerate")


def erase_flat_vertices(mesh: TriMesh) -> TriMesh:
    """Erase marked points of angle exactly 2*pi (keep one vertex on a torus)."""
    work = mesh
    while True:
        orbits = work.vertex_orbits()
        if len(orbits) == 1:
            return work
        target = None
        for orbit in orbits:
            if work.orbit_turning(orbit) == 1:
                target = orbit
                break
        if target is None:
            return work
        work = _erase_vertex(work, target)


# -- cocircular cells -----------------------------------------------------------


def _degenerate_edges(mesh: TriMesh):
    out = set()
    for (t, e), (q, f) in mesh.glue.items():
        if (q, f, t, e) in out or (t, e, q, f) in out:
            continue
        _, _, x, y, z, w = _quad(mesh, t, e)
        if _incircle(x, y, z, w) == 0:
            out.add((t, e, q, f))
    return out


def _canonicalize_cells(mesh: TriMesh) -> TriMesh:
    """Re-fan every maximal cocircular cell from its canonical corner."""
    degen = _degenerate_edges(mesh)
    if not degen:
        return mesh
    degen_slots = set()
    parent = list(range(len(mesh.tris)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (t, e, q, f) in degen:
        degen_slots.add((t, e))
        degen_slots.add((q, f))
        parent[find(t)] = find(q)

    cells: Dict[int, List[int]] = {}
    for t in range(len(mesh.tris)):
        cells.setdefault(find(t), []).append(t)

    new_tris = []
    new_glue_local = {}
    outer_map: Dict[EdgeSlot, EdgeSlot] = {}
    dead: List[int] = []
    next_tri = 0
    for root, members in cells.items():
        if len(members) == 1:
            continue
        fan = _fan_cell(mesh, members, degen_slots)
        if fan is None:
            continue  # leave this cell triangulated as it stands
        tris, glue_local, boundary_slots = fan
        base = next_tri
        next_tri += len(tris)
        dead.extend(members)
        new_tris.extend(tris)
        for (i, e), (j, f) in glue_local.items():
            new_glue_local[(base + i, e)] = (base + j, f)
        for old_slot, (i, e) in boundary_slots.items():
            outer_map[old_slot] = (base + i, e)
    if not dead:
        return mesh
    return _replace_triangles(mesh, dead, new_tris, new_glue_local, outer_map)


def _fan_cell(mesh: TriMesh, members: List[int], degen_slots):
    """Develop a cocircular cell and re-triangulate it as a canonical fan.

    Returns (triangles, local gluings, old boundary slot -> new slot) or
    None when the cell fails the embedded strictly convex check."""
    member_set = set(members)
    # develop all member triangles in the chart of members[0]
    offsets = {members[0]: Vec2.of(0, 0, mesh.tris[0][0].d)}
    stack = [members[0]]
    while stack:
        t = stack.pop()
        for e in range(3):
            if (t, e) not in degen_slots:
                continue
            q, f = mesh.glue[(t, e)]
            if q in offsets:
                continue
            # identify end of (t, e) with start of ... : start of (q, f)
            # corresponds to the head of edge (t, e)
            tau = (mesh.point(t, (e + 1) % 3) + offsets[t]) - mesh.point(q, f)
            offsets[q] = tau
            stack.append(q)
    if set(offsets) != member_set:
        return None
    # boundary walk
    start = None
    for t in members:
        for e in range(3):
            if (t, e) not in degen_slots:
                start = (t, e)
                break
        if start:
            break
    if start is None:
        return None  # cell with no boundary (should not happen)
    walk = []
    cur = start
    guard = 0
    while True:
        guard += 1
        if guard > 3 * len(members) + 10:
            return None
        walk.append(cur)
        t, e = cur
        nxt = (t, (e + 1) % 3)
        while nxt in degen_slots:
            q, f = mesh.glue[nxt]
            nxt = (q, (f + 1) % 3)
        cur = nxt
        if cur == start:
            break
    pts = [mesh.point(t, e) + offsets[t] for (t, e) in walk]
    m = len(pts)
    if m < 3:
        return None
    for i in range(m):
        a, b, c = pts[i], pts[(i + 1) % m], pts[(i + 2) % m]
        if triangle_area2(a, b, c).sign() <= 0:
            return None
    if len(set(_vec_key(p) for p in pts)) != m:
        return None
    vecs = [pts[(i + 1) % m] - pts[i] for i in range(m)]
    r = min(range(m), key=lambda i: [_vec_key(vecs[(i + j) % m]) for j in range(m)])
    ordered = [pts[(r + j) % m] for j in range(m)]
    tris = [(ordered[0], ordered[i], ordered[i + 1]) for i in range(1, m - 1)]
    glue_local = {}
    for i in range(1, m - 3 + 1):
        if i + 1 <= m - 2:
            glue_local[(i - 1, 2)] = (i, 0)
            glue_local[(i, 0)] = (i - 1, 2)
    boundary_slots = {}
    for j, old_slot in enumerate(walk):
        jj = (j - r) % m  # boundary edge index relative to the fan base
        if jj == 0:
            boundary_slots[old_slot] = (0, 0)
        elif jj == m - 1:
            boundary_slots[old_slot] = (m - 3, 2)
        else:
            boundary_slots[old_slot] = (jj - 1, 1)
    return tris, glue_local, boundary_slots


# -- minimal breadth-first code ---------------------------------------------------


def _bfs_code(mesh: TriMesh, t0: int, e0: int):
    label = {t0: 0}
    rot = {t0: e0}
    order = [t0]
    head = 0
    while head < len(order):
        t = order[head]
        head += 1
        for j in range(3):
            q, f = mesh.glue[(t, (rot[t] + j) % 3)]
            if q not in label:
                label[q] = len(order)
                rot[q] = f
                order.append(q)
    code = []
    for t in order:
        vecs = tuple(_vec_key(mesh.edge_vec(t, (rot[t] + j) % 3)) for j in range(3))
        adj = []
        for j in range(3):
            q, f = mesh.glue[(t, (rot[t] + j) % 3)]
            adj.append((label[q], (f - rot[q]) % 3))
        code.append((vecs, tuple(adj)))
    return tuple(code)


def minimal_code(mesh: TriMesh):
    return min(
        _bfs_code(mesh, t, e)
        for t in range(len(mesh.tris))
        for e in range(3)
    )


def mesh_from_code(code, disc: int) -> TriMesh:
    tris = []
    glue = {}
    for t, (vecs, adj) in enumerate(code):
        e0 = Vec2(FieldElem(Fraction(vecs[0][0]), Fraction(vecs[0][1]), disc),
                  FieldElem(Fraction(vecs[0][2]), Fraction(vecs[0][3]), disc))
        e1 = Vec2(FieldElem(Fraction(vecs[1][0]), Fraction(vecs[1][1]), disc),
                  FieldElem(Fraction(vecs[1][2]), Fraction(vecs[1][3]), disc))
        p0 = Vec2.of(0, 0, disc)
        tris.append((p0, e0, e0 + e1))
        for j, (q, f) in enumerate(adj):
            glue[(t, j)] = (q, f)
    return TriMesh(tris, glue)


def canonical_mesh_code(mesh: TriMesh):
    """Full pipeline: erase flat points, Delaunay, fan cells, minimal code."""
    work = mesh.clone()
    work = erase_flat_vertices(work)
    delaunay_flip(work)
    work = _canonicalize_cells(work)
    return minimal_code(work)
