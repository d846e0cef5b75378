"""JSON schemas for surfaces, matrices and decompositions.

Coordinates are exact: field elements travel as strings like
``-5/2+3/2*sqrt(3)`` (or ``{"a": "p/q", "b": "r/s"}`` objects); decimal
literals are rejected with a pointer to the offending path.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, Optional

from .cylinders import CylinderDecomposition, Direction, commensurability_class
from .errors import RequiresExactRational, SchemaError
from .field import FieldElem, Mat2, Vec2, parse_field_elem
from .surface import EdgeRef, PlanarPolygon, TranslationSurface


def field_elem_from_json(obj, d: Optional[int] = None, path: str = "value") -> FieldElem:
    if isinstance(obj, bool):
        raise SchemaError(f"{path}: expected an exact number, got a boolean")
    if isinstance(obj, int):
        return FieldElem.of(obj, d if d is not None else 3)
    if isinstance(obj, float):
        raise RequiresExactRational(
            f"{path}: decimal {obj!r} is not exact; write a rational like 1/2 "
            "or a surd like 2-sqrt(3)"
        )
    if isinstance(obj, str):
        try:
            return parse_field_elem(obj, d)
        except RequiresExactRational as exc:
            raise RequiresExactRational(f"{path}: {exc}") from None
    if isinstance(obj, dict):
        extra = set(obj) - {"a", "b"}
        if extra or "a" not in obj or "b" not in obj:
            raise SchemaError(f"{path}: field-element object needs exactly keys 'a' and 'b'")
        try:
            a = Fraction(obj["a"])
            b = Fraction(obj["b"])
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"{path}: bad rational component: {exc}") from None
        return FieldElem(a, b, d if d is not None else 3)
    raise SchemaError(f"{path}: cannot read a field element from {type(obj).__name__}")


def field_elem_to_json(x: FieldElem) -> str:
    return x.canonical_str()


def surface_to_dict(s: TranslationSurface) -> dict:
    return {
        "field_d": s.field_d,
        "polygons": [
            [[field_elem_to_json(v.x), field_elem_to_json(v.y)] for v in poly.vertices]
            for poly in s.polygons
        ],
        "gluings": sorted(
            [list(a), list(b)] for a, b in s.gluings.items() if a <= b
        ),
    }


def surface_from_dict(doc: dict) -> TranslationSurface:
    if not isinstance(doc, dict):
        raise SchemaError("surface document must be a JSON object")
    for key in ("field_d", "polygons", "gluings"):
        if key not in doc:
            raise SchemaError(f"surface document is missing key {key!r}")
    extra = set(doc) - {"field_d", "polygons", "gluings"}
    if extra:
        raise SchemaError(f"surface document has unknown keys {sorted(extra)}")
    d = doc["field_d"]
    if not isinstance(d, int) or d < 2:
        raise SchemaError("field_d: must be an integer >= 2")
    if not isinstance(doc["polygons"], list) or not doc["polygons"]:
        raise SchemaError("polygons: must be a non-empty list")
    polygons = []
    for p, poly in enumerate(doc["polygons"]):
        if not isinstance(poly, list) or len(poly) < 3:
            raise SchemaError(f"polygons[{p}]: must be a list of at least 3 vertices")
        verts = []
        for i, vert in enumerate(poly):
            if not isinstance(vert, list) or len(vert) != 2:
                raise SchemaError(f"polygons[{p}][{i}]: vertex must be a pair [x, y]")
            x = field_elem_from_json(vert[0], d, f"polygons[{p}][{i}][0]")
            y = field_elem_from_json(vert[1], d, f"polygons[{p}][{i}][1]")
            verts.append(Vec2(x, y))
        polygons.append(PlanarPolygon(tuple(verts)))
    if not isinstance(doc["gluings"], list):
        raise SchemaError("gluings: must be a list of edge pairs")
    gluings: Dict[EdgeRef, EdgeRef] = {}
    for g, pair in enumerate(doc["gluings"]):
        if (
            not isinstance(pair, list) or len(pair) != 2
            or any(not isinstance(ref, list) or len(ref) != 2 for ref in pair)
            or any(not isinstance(k, int) for ref in pair for k in ref)
        ):
            raise SchemaError(f"gluings[{g}]: must be [[p, e], [q, f]] with integers")
        a, b = EdgeRef(*pair[0]), EdgeRef(*pair[1])
        for ref in (a, b):
            if not (0 <= ref.polygon_index < len(polygons)):
                raise SchemaError(f"gluings[{g}]: polygon index {ref.polygon_index} out of range")
            if not (0 <= ref.edge_index < len(polygons[ref.polygon_index])):
                raise SchemaError(f"gluings[{g}]: edge index {ref.edge_index} out of range")
        if a in gluings or b in gluings:
            raise SchemaError(f"gluings[{g}]: edge glued twice")
        gluings[a] = b
        gluings[b] = a
    return TranslationSurface(polygons, gluings)


def surface_dumps(s: TranslationSurface) -> str:
    return json.dumps(surface_to_dict(s), indent=2)


def surface_loads(text: str) -> TranslationSurface:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    return surface_from_dict(doc)


def matrix_from_obj(obj, d: Optional[int] = None, path: str = "matrix") -> Mat2:
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON: {exc}") from None
    if (
        not isinstance(obj, list) or len(obj) != 2
        or any(not isinstance(row, list) or len(row) != 2 for row in obj)
    ):
        raise SchemaError(f"{path}: must be [[a, b], [c, d]]")
    entries = [
        field_elem_from_json(obj[i][j], d, f"{path}[{i}][{j}]")
        for i in range(2) for j in range(2)
    ]
    return Mat2(*entries)


def matrix_to_obj(m: Mat2) -> list:
    a, b, c, d = m.entries()
    return [[field_elem_to_json(a), field_elem_to_json(b)],
            [field_elem_to_json(c), field_elem_to_json(d)]]


def direction_from_text(text: str, d: int = 3) -> Direction:
    parts = text.split(",")
    if len(parts) != 2:
        raise SchemaError(f"direction {text!r}: expected \"x,y\"")
    x = field_elem_from_json(parts[0].strip(), d, "direction x")
    y = field_elem_from_json(parts[1].strip(), d, "direction y")
    return Direction.of(Vec2(x, y))


def decomposition_to_dict(dec: CylinderDecomposition) -> dict:
    cls = commensurability_class(dec)
    out = {
        "direction": [
            field_elem_to_json(dec.direction.vector.x),
            field_elem_to_json(dec.direction.vector.y),
        ],
        "cylinders": [
            {
                "circumference": field_elem_to_json(c.circumference),
                "height": field_elem_to_json(c.height),
                "modulus": field_elem_to_json(c.modulus),
                "boundary_connections": c.boundary_connections,
            }
            for c in dec.cylinders
        ],
    }
    if cls is None:
        out["gcd"] = None
        out["multipliers"] = None
    else:
        alpha, multipliers = cls
        out["gcd"] = field_elem_to_json(alpha)
        out["multipliers"] = multipliers
    return out
