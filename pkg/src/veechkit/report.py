"""One-shot reproduction report for the unfolded (1, 4, 7)/12 triangle.

Runs the whole pipeline on a freshly built surface and diffs every derived
quantity against a frozen expected-value table.  Each entry carries exact
surd strings; the text rendering adds 12-digit decimals for human readers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import List, Optional, Tuple

from .cylinders import DEFAULT_BUDGET, decompose, commensurability_class, width_ratio_invariant
from .errors import VeechKitError
from .field import Mat2, parse_field_elem
from .hyperbolic import (
    domain_geodesics,
    domain_polygon,
    domain_vertices,
    gauss_bonnet_area,
    lattice_certificate,
    polygon_area,
)
from .surface import apply_matrix, cone_points, euclidean_isometry_group, unfold_triangle
from .veech import build_generators, is_dihedral_group, verify_membership


@dataclass(frozen=True)
class ReportEntry:
    key: str
    description: str
    expected: str
    computed: str

    @property
    def match(self) -> bool:
        return self.expected == self.computed

    def as_dict(self) -> dict:
        return {
            "key": self.key,
            "description": self.description,
            "expected": self.expected,
            "computed": self.computed,
            "match": self.match,
        }


@dataclass(frozen=True)
class PaperReport:
    entries: Tuple[ReportEntry, ...]
    error: Optional[str] = None

    @property
    def all_match(self) -> bool:
        return self.error is None and all(e.match for e in self.entries)

    def as_dict(self, timestamp: bool = True) -> dict:
        out = {
            "overall_pass": self.all_match,
            "error": self.error,
            "entries": [e.as_dict() for e in self.entries],
        }
        if timestamp:
            out["generated_at"] = datetime.now(timezone.utc).isoformat()
        return out

    def to_json(self, timestamp: bool = True) -> str:
        return json.dumps(self.as_dict(timestamp=timestamp), indent=2)

    def to_text(self) -> str:
        lines = ["reproduction report: unfolded (1, 4, 7)/12 triangle", ""]
        width = max((len(e.key) for e in self.entries), default=0)
        for e in self.entries:
            flag = "ok " if e.match else "FAIL"
            lines.append(f"[{flag}] {e.key.ljust(width)}  {e.computed}")
            if not e.match:
                lines.append(f"{'':{width + 8}}expected: {e.expected}")
        if self.error:
            lines.append(f"pipeline error: {self.error}")
        lines.append("")
        lines.append(f"overall: {'PASS' if self.all_match else 'FAIL'}")
        return "\n".join(lines)


def _fe(text: str):
    return parse_field_elem(text)


def _mat(rows) -> Mat2:
    return Mat2(_fe(rows[0][0]), _fe(rows[0][1]), _fe(rows[1][0]), _fe(rows[1][1]))


def _fmt_multiset(values) -> str:
    return ", ".join(str(v) for v in sorted(values))


EXPECTED_MATRICES = {
    "P_B": _mat([["1", "10+6*sqrt(3)"], ["0", "1"]]),
    "P_E": _mat([["-1/2-sqrt(3)", "6+7/2*sqrt(3)"], ["-1/2*sqrt(3)", "5/2+sqrt(3)"]]),
    "P_D": _mat([["-11/2-7/2*sqrt(3)", "115/2+67/2*sqrt(3)"],
                 ["-1/2-1/2*sqrt(3)", "15/2+7/2*sqrt(3)"]]),
    "R_AB": _mat([["1", "0"], ["0", "-1"]]),
    "R_AE": _mat([["1/2*sqrt(3)", "1/2"], ["1/2", "-1/2*sqrt(3)"]]),
    "R_BC": _mat([["1", "-10-6*sqrt(3)"], ["0", "-1"]]),
    "R_DE": _mat([["-3/2-1/2*sqrt(3)", "13/2+7/2*sqrt(3)"],
                  ["1/2-1/2*sqrt(3)", "3/2+1/2*sqrt(3)"]]),
    "R_CD": _mat([["5+3*sqrt(3)", "-51-30*sqrt(3)"], ["1", "-5-3*sqrt(3)"]]),
    "BC_CD": _mat([["-5-3*sqrt(3)", "53+30*sqrt(3)"], ["-1", "5+3*sqrt(3)"]]),
    "shear": _mat([["1", "5+3*sqrt(3)"], ["0", "1"]]),
}

_ONE = _fe("1")

EXPECTED_VALUES = {
    "unfolding.polygon_count": "24",
    "unfolding.genus": "4",
    "unfolding.cone_angles": "14*pi x1, 2*pi x5",
    "moduli.horizontal": _fmt_multiset(
        [_ONE / _fe("10+6*sqrt(3)")] * 2 + [_ONE / _fe("5+3*sqrt(3)")] * 2
    ),
    "gcd.horizontal": str(_ONE / _fe("10+6*sqrt(3)")),
    "multipliers.horizontal": "[1, 1, 2, 2]",
    "parabolic.horizontal": str(EXPECTED_MATRICES["P_B"]),
    "slope.mirror": "2-sqrt(3)",
    "moduli.mirror": _fmt_multiset(
        [_ONE / _fe("6+4*sqrt(3)")] * 2 + [_fe("3") / _fe("6+4*sqrt(3)")] * 2
    ),
    "gcd.mirror": str(_ONE / _fe("6+4*sqrt(3)")),
    "multipliers.mirror": "[1, 1, 3, 3]",
    "parabolic.mirror": str(EXPECTED_MATRICES["P_E"]),
    "slope.third": "-4/11+3/11*sqrt(3)",
    "moduli.third": _fmt_multiset(
        [_ONE / _fe("58+34*sqrt(3)")] * 2 + [_ONE / _fe("29+17*sqrt(3)")] * 2
    ),
    "gcd.third": str(_ONE / _fe("58+34*sqrt(3)")),
    "multipliers.third": "[1, 1, 2, 2]",
    "parabolic.third": str(EXPECTED_MATRICES["P_D"]),
    "reflection.AB": str(EXPECTED_MATRICES["R_AB"]),
    "reflection.AE": str(EXPECTED_MATRICES["R_AE"]),
    "reflection.BC": str(EXPECTED_MATRICES["R_BC"]),
    "reflection.DE": str(EXPECTED_MATRICES["R_DE"]),
    "reflection.CD": str(EXPECTED_MATRICES["R_CD"]),
    "trace.BC_CD": "0",
    "product.BC_CD": str(EXPECTED_MATRICES["BC_CD"]),
    "membership.verified": "9/9",
    "membership.negative_control": "rejected",
    "domain.vertex_A": "0+1i",
    "domain.vertex_B": "inf",
    "domain.vertex_C": "5+3*sqrt(3)+1i",
    "domain.vertex_D": "4+3*sqrt(3)",
    "domain.vertex_E": "2+sqrt(3)",
    "domain.angle_A": "1/6*pi",
    "domain.angle_C": "1/2*pi",
    "orbifold.area": "14/3*pi",
    "domain.polygon_area": "7/3*pi",
    "bound.area_lower": "11/3*pi",
    "bound.degree_ratio": "14/11",
    "certificate.verdict": "LATTICE_CONFIRMED",
    "cusp.modulus_ratios": "B=2, E=3, D=2",
    "cusp.widths_B": _fmt_multiset([_fe("1")] * 2 + [_fe("1+sqrt(3)")] * 4),
    "cusp.widths_D": _fmt_multiset([_fe("1")] * 2 + [_fe("1/2+1/2*sqrt(3)")] * 4),
    "cusp.invariants_distinct": "True",
    "sheared.symmetry_order": "8",
    "sheared.symmetry_dihedral": "True",
}


def run_report(budget: int = DEFAULT_BUDGET) -> PaperReport:
    entries: List[ReportEntry] = []

    def add(key: str, description: str, computed) -> None:
        entries.append(ReportEntry(key, description, EXPECTED_VALUES[key], str(computed)))

    try:
        s = unfold_triangle(1, 4, 7, 12)
        rep = cone_points(s)
        add("unfolding.polygon_count", "triangles in the unfolded surface", rep.num_polygons)
        add("unfolding.genus", "genus of the glued surface", rep.genus)
        add("unfolding.cone_angles", "vertex angles with multiplicities",
            ", ".join(f"{a} x{m}" for a, m in rep.cone_angles))

        gen = build_generators(s, budget)
        for slot, dirn, mult_key in (
            ("horizontal", gen.dir_B, "multipliers.horizontal"),
            ("mirror", gen.dir_E, "multipliers.mirror"),
            ("third", gen.dir_D, "multipliers.third"),
        ):
            dec = decompose(s, dirn, budget)
            alpha, multipliers = commensurability_class(dec)
            add(f"moduli.{slot}", f"cylinder moduli in the {slot} direction",
                _fmt_multiset(dec.moduli()))
            add(f"gcd.{slot}", "greatest common divisor of the moduli", alpha)
            add(mult_key, "Dehn twist multiplicities modulus/gcd", multipliers)
        add("slope.mirror", "slope of the second mirror axis", gen.dir_E.slope())
        add("slope.third", "second eigendirection of the DE reflection", gen.dir_D.slope())
        add("parabolic.horizontal", "parabolic fixing the horizontal cusp", gen.P_B.m)
        add("parabolic.mirror", "parabolic fixing the mirror-slope cusp", gen.P_E.m)
        add("parabolic.third", "parabolic fixing the third cusp", gen.P_D.m)
        add("reflection.AB", "horizontal mirror reflection", gen.R_AB.m)
        add("reflection.AE", "second mirror reflection", gen.R_AE.m)
        add("reflection.BC", "parabolic composed with the horizontal mirror", gen.R_BC.m)
        add("reflection.DE", "mirror composed with its parabolic", gen.R_DE.m)
        add("reflection.CD", "DE reflection composed with the third parabolic", gen.R_CD.m)
        product = gen.R_BC.m * gen.R_CD.m
        add("trace.BC_CD", "trace certifying the right angle", product.trace())
        add("product.BC_CD", "product of the BC and CD reflections", product)

        verified = sum(
            1 for g in gen.all_named().values() if verify_membership(s, g)
        )
        add("membership.verified", "generators passing surface equivalence", f"{verified}/9")
        control = Mat2.of(1, 1, 0, 1)
        add("membership.negative_control", "unit shear must not preserve the surface",
            "rejected" if not verify_membership(s, control) else "accepted")

        vertices = domain_vertices(gen)
        for name in "ABCDE":
            add(f"domain.vertex_{name}", f"pentagon corner {name}", vertices[name])
        polygon = domain_polygon(gen)
        angles = polygon.interior_angles()
        add("domain.angle_A", "pentagon angle at A", angles[0])
        add("domain.angle_C", "pentagon angle at C", angles[2])

        cert = lattice_certificate(s, budget, gen=gen)
        values = {k: v for step in cert.steps for k, v in step.values}
        add("orbifold.area", "area of the doubled-pentagon orbifold",
            values.get("area", "missing"))
        add("domain.polygon_area", "hyperbolic area of the pentagon",
            values.get("pentagon_area", "missing"))
        add("bound.area_lower", "area lower bound for any larger quotient",
            values.get("area_lower_bound", "missing"))
        add("bound.degree_ratio", "covering-degree bound",
            values.get("degree_ratio", "missing").split(" = ")[0])
        add("certificate.verdict", "lattice certificate verdict", cert.verdict)

        from .veech import cusp_invariants

        invs = {name: cusp_invariants(s, d, budget) for name, d in gen.cusp_directions().items()}
        add("cusp.modulus_ratios", "max/min modulus ratio per cusp",
            ", ".join(f"{n}={invs[n].modulus_ratio}" for n in ("B", "E", "D")))
        add("cusp.widths_B", "width ratios across the horizontal cylinders",
            _fmt_multiset(invs["B"].width_ratios))
        add("cusp.widths_D", "width ratios across the third-direction cylinders",
            _fmt_multiset(invs["D"].width_ratios))
        triples = [(i.modulus_ratio, i.width_ratios) for i in invs.values()]
        add("cusp.invariants_distinct", "the three cusp invariants differ pairwise",
            len(set(triples)) == len(triples))

        sheared = apply_matrix(EXPECTED_MATRICES["shear"], s)
        group = euclidean_isometry_group(sheared)
        add("sheared.symmetry_order", "Euclidean symmetries of the sheared surface",
            len(group))
        add("sheared.symmetry_dihedral", "symmetry group is dihedral",
            is_dihedral_group(group))
    except VeechKitError as exc:
        return PaperReport(tuple(entries), error=f"{type(exc).__name__}: {exc}")
    return PaperReport(tuple(entries))
