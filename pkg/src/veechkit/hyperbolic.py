"""Upper half-plane geometry and the lattice certificate.

Determinant +1 matrices act by Moebius maps, determinant -1 matrices act
through complex conjugation; reflections (det -1, trace 0) fix a geodesic.
The certificate rebuilds the fundamental-domain pentagon from the derived
reflections, doubles it to an orbifold, and runs the Gauss-Bonnet index
bound; every comparison is an exact rational statement about multiples of
pi.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from .errors import (
    NonHyperbolic,
    NotAnInvolution,
    UnsupportedAngle,
    UnsupportedField,
    VeechKitError,
)
from .field import FieldElem, Mat2, AngleMultiple, cos_of_sixths, tan_of_twelfths
from .veech import (
    CuspInvariant,
    GeneratorSet,
    GroupElement,
    _as_mat,
    build_generators,
    cusp_invariants,
)
from .cylinders import DEFAULT_BUDGET
from .surface import TranslationSurface


@dataclass(frozen=True)
class BoundaryPoint:
    """Point of the circle at infinity: a real number or infinity itself."""

    x: Optional[FieldElem]  # None encodes infinity

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __str__(self):
        return "inf" if self.x is None else str(self.x)

    __repr__ = __str__


INFINITY = BoundaryPoint(None)


@dataclass(frozen=True)
class UHPoint:
    """Point of the open upper half-plane."""

    re: FieldElem
    im: FieldElem

    def __post_init__(self):
        if self.im.sign() <= 0:
            raise ValueError(f"imaginary part {self.im} must be positive")

    def __str__(self):
        return f"{self.re}+{self.im}i"

    __repr__ = __str__


HPoint = Union[UHPoint, BoundaryPoint]


@dataclass(frozen=True)
class Geodesic:
    """Vertical line (x0 set) or semicircle (center and squared radius)."""

    x0: Optional[FieldElem] = None
    center: Optional[FieldElem] = None
    r2: Optional[FieldElem] = None

    @staticmethod
    def vertical_line(x0: FieldElem) -> "Geodesic":
        return Geodesic(x0=x0)

    @staticmethod
    def semicircle(center: FieldElem, r2: FieldElem) -> "Geodesic":
        if r2.sign() <= 0:
            raise ValueError("squared radius must be positive")
        return Geodesic(center=center, r2=r2)

    @property
    def is_vertical(self) -> bool:
        return self.x0 is not None

    def endpoints(self) -> Tuple[BoundaryPoint, BoundaryPoint]:
        """Ideal endpoints, normalized p < q (infinity last for verticals)."""
        if self.is_vertical:
            return (BoundaryPoint(self.x0), INFINITY)
        r = self.r2.sqrt()
        if r is None:
            raise UnsupportedField(
                f"radius sqrt({self.r2}) leaves the field; endpoints are inexact"
            )
        return (BoundaryPoint(self.center - r), BoundaryPoint(self.center + r))

    def contains(self, p: HPoint) -> bool:
        if isinstance(p, BoundaryPoint):
            if p.is_infinity:
                return self.is_vertical
            if self.is_vertical:
                return p.x == self.x0
            diff = p.x - self.center
            return diff * diff == self.r2
        if self.is_vertical:
            return p.re == self.x0
        diff = p.re - self.center
        return diff * diff + p.im * p.im == self.r2

    def tangent_at(self, p: UHPoint):
        from .field import Vec2

        if self.is_vertical:
            return Vec2(FieldElem.of(0, p.re.d), FieldElem.of(1, p.re.d))
        return Vec2(p.im, self.center - p.re)

    def __str__(self):
        if self.is_vertical:
            return f"vertical x={self.x0}"
        return f"semicircle center={self.center} r^2={self.r2}"

    __repr__ = __str__


def moebius_apply(g, z: HPoint) -> HPoint:
    """Action on the closed half-plane; det -1 elements conjugate first."""
    m = _as_mat(g)
    det = m.det()
    if det != 1 and det != -1:
        from .errors import NotUnimodular

        raise NotUnimodular(f"determinant {det} is not +-1")
    a, b, c, d = m.entries()
    if isinstance(z, BoundaryPoint):
        if z.is_infinity:
            return INFINITY if not c else BoundaryPoint(a / c)
        den = c * z.x + d
        if not den:
            return INFINITY
        return BoundaryPoint((a * z.x + b) / den)
    x, y = z.re, z.im
    if det == -1:
        y = -y
    nre = a * x + b
    nim = a * y
    dre = c * x + d
    dim = c * y
    den = dre * dre + dim * dim
    re = (nre * dre + nim * dim) / den
    im = (nim * dre - nre * dim) / den
    return UHPoint(re, im)


def fixed_geodesic(g) -> Geodesic:
    """Fixed-point set in the half-plane of a det -1, trace 0 element."""
    m = _as_mat(g)
    if m.det() != -1 or m.trace() != 0:
        raise NotAnInvolution(
            f"{m} does not act as a reflection (need det -1 and trace 0)"
        )
    a, b, c, _d = m.entries()
    if not c:
        return Geodesic.vertical_line(-b / (2 * a))
    return Geodesic.semicircle(a / c, (c * c).inverse())


def intersect(g1: Geodesic, g2: Geodesic) -> Optional[HPoint]:
    """Intersection point of two distinct geodesics, if any.

    Two verticals meet at infinity; tangent semicircles meet at their
    common ideal endpoint."""
    if g1 == g2:
        raise ValueError("geodesics coincide")
    if g1.is_vertical and g2.is_vertical:
        return INFINITY
    if g1.is_vertical or g2.is_vertical:
        v, s = (g1, g2) if g1.is_vertical else (g2, g1)
        diff = v.x0 - s.center
        im2 = s.r2 - diff * diff
        sgn = im2.sign()
        if sgn < 0:
            return None
        if sgn == 0:
            return BoundaryPoint(v.x0)
        im = im2.sqrt()
        if im is None:
            raise UnsupportedField(f"intersection height sqrt({im2}) leaves the field")
        return UHPoint(v.x0, im)
    if g1.center == g2.center:
        return None
    # radical line of the two circles
    num = (g1.r2 - g2.r2) - (g1.center * g1.center - g2.center * g2.center)
    x = num / (2 * (g2.center - g1.center))
    diff = x - g1.center
    im2 = g1.r2 - diff * diff
    sgn = im2.sign()
    if sgn < 0:
        return None
    if sgn == 0:
        return BoundaryPoint(x)
    im = im2.sqrt()
    if im is None:
        raise UnsupportedField(f"intersection height sqrt({im2}) leaves the field")
    return UHPoint(x, im)


def interior_angle(g1: Geodesic, g2: Geodesic, at: UHPoint) -> AngleMultiple:
    """Angle between the two geodesics' tangent lines at a common point.

    Returned in [0, pi/2] and recognized exactly on the pi/12 grid."""
    for g in (g1, g2):
        if not g.contains(at):
            raise ValueError(f"{g} does not pass through {at}")
    u = g1.tangent_at(at)
    w = g2.tangent_at(at)
    cross = u.cross(w)
    dot = u.dot(w)
    if not dot:
        return AngleMultiple(Fraction(1, 2))
    ratio = abs(cross / dot)
    for k in range(6):
        if ratio == tan_of_twelfths(k):
            return AngleMultiple(Fraction(k, 12))
    raise UnsupportedAngle(f"tangent angle with |tan| = {ratio} is off the pi/12 grid")


@dataclass(frozen=True)
class OrbifoldData:
    """Signature of a hyperbolic orbifold for the Gauss-Bonnet formula."""

    genus: int
    punctures: int
    cone_angles: Tuple[AngleMultiple, ...]

    def __post_init__(self):
        if self.punctures < 0:
            raise ValueError("puncture count cannot be negative")
        for theta in self.cone_angles:
            if not (0 < theta.k < 2):
                raise ValueError(f"cone angle {theta} must lie strictly in (0, 2*pi)")


def gauss_bonnet_area(o: OrbifoldData) -> AngleMultiple:
    """area = 2*pi*(2g + p - 2) + sum(2*pi - theta_i), exact."""
    k = Fraction(2 * (2 * o.genus + o.punctures - 2))
    for theta in o.cone_angles:
        k += 2 - theta.k
    if k <= 0:
        raise NonHyperbolic(f"signature has area {k}*pi <= 0")
    return AngleMultiple(k)


@dataclass(frozen=True)
class HypPolygon:
    """Geodesic polygon; vertex i joins sides i-1 and i, ideal vertices allowed."""

    vertices: Tuple[HPoint, ...]
    sides: Tuple[Geodesic, ...]

    def __post_init__(self):
        n = len(self.vertices)
        if n != len(self.sides) or n < 3:
            raise ValueError("need equally many vertices and sides, at least 3")
        for i in range(n):
            side = self.sides[i]
            for v in (self.vertices[i], self.vertices[(i + 1) % n]):
                if not side.contains(v):
                    raise ValueError(f"vertex {v} is not on side {side}")

    def interior_angles(self) -> List[AngleMultiple]:
        """Angle at each vertex; 0 at ideal vertices."""
        n = len(self.vertices)
        out = []
        for i in range(n):
            v = self.vertices[i]
            if isinstance(v, BoundaryPoint):
                out.append(AngleMultiple(Fraction(0)))
            else:
                out.append(interior_angle(self.sides[(i - 1) % n], self.sides[i], v))
        return out


def polygon_area(p: HypPolygon) -> AngleMultiple:
    """(n - 2)*pi minus the interior angle sum, exact."""
    k = Fraction(len(p.vertices) - 2)
    for theta in p.interior_angles():
        k -= theta.k
    if k <= 0:
        raise NonHyperbolic(f"polygon has area {k}*pi <= 0")
    return AngleMultiple(k)


_SIDE_ORDER = ["AB", "BC", "CD", "DE", "EA"]
_VERTEX_OF_SIDES = {"A": ("EA", "AB"), "B": ("AB", "BC"), "C": ("BC", "CD"),
                    "D": ("CD", "DE"), "E": ("DE", "EA")}


def domain_geodesics(gen: GeneratorSet) -> Dict[str, Geodesic]:
    return {
        "AB": fixed_geodesic(gen.R_AB),
        "BC": fixed_geodesic(gen.R_BC),
        "CD": fixed_geodesic(gen.R_CD),
        "DE": fixed_geodesic(gen.R_DE),
        "EA": fixed_geodesic(gen.R_AE),
    }


def domain_vertices(gen: GeneratorSet) -> Dict[str, HPoint]:
    """Pentagon corners as intersections of consecutive fixed geodesics."""
    sides = domain_geodesics(gen)
    out = {}
    for name, (s1, s2) in _VERTEX_OF_SIDES.items():
        p = intersect(sides[s1], sides[s2])
        if p is None:
            raise VeechKitError(f"sides {s1} and {s2} do not meet; no pentagon corner {name}")
        out[name] = p
    return out


def incidence_check(gen: GeneratorSet, vertices: Dict[str, HPoint]) -> bool:
    """Each fixed geodesic passes through exactly its two named vertices."""
    sides = domain_geodesics(gen)
    for side_name, geo in sides.items():
        for vertex_name, v in vertices.items():
            expected = side_name[0] == vertex_name or side_name[1] == vertex_name
            if geo.contains(v) != expected:
                return False
    return True


def domain_polygon(gen: GeneratorSet) -> HypPolygon:
    sides = domain_geodesics(gen)
    vertices = domain_vertices(gen)
    return HypPolygon(
        vertices=tuple(vertices[name[0]] for name in _SIDE_ORDER),
        sides=tuple(sides[name] for name in _SIDE_ORDER),
    )


# -- certificate -------------------------------------------------------------------


@dataclass(frozen=True)
class CertStep:
    name: str
    detail: str
    values: Tuple[Tuple[str, str], ...]
    passed: bool

    def as_dict(self):
        return {
            "name": self.name,
            "detail": self.detail,
            "values": dict(self.values),
            "passed": self.passed,
        }


@dataclass(frozen=True)
class CertificateReport:
    steps: Tuple[CertStep, ...]
    verdict: str  # LATTICE_CONFIRMED | INCONCLUSIVE
    failing_step: Optional[str] = None

    @property
    def confirmed(self) -> bool:
        return self.verdict == "LATTICE_CONFIRMED"

    def as_dict(self):
        return {
            "verdict": self.verdict,
            "failing_step": self.failing_step,
            "steps": [s.as_dict() for s in self.steps],
        }


def lattice_certificate(
    s: TranslationSurface,
    budget: int = DEFAULT_BUDGET,
    gen: Optional[GeneratorSet] = None,
) -> CertificateReport:
    """Certify the lattice property by the area-index argument.

    Builds verified generators, rebuilds the domain pentagon from their
    fixed geodesics, doubles it to an orbifold, and shows the covering
    degree onto any larger quotient is below 2, forcing equality."""
    steps: List[CertStep] = []

    def fail(name: str, detail: str) -> CertificateReport:
        steps.append(CertStep(name, detail, (), False))
        return CertificateReport(tuple(steps), "INCONCLUSIVE", name)

    try:
        if gen is None:
            gen = build_generators(s, budget)
    except VeechKitError as exc:
        return fail("generators", f"generator construction failed: {exc}")
    steps.append(CertStep(
        "generators",
        "derived five reflections, -I and three parabolics; "
        "each verified as an affine automorphism",
        tuple((name, str(g.m)) for name, g in gen.all_named().items()),
        True,
    ))

    try:
        vertices = domain_vertices(gen)
        if not incidence_check(gen, vertices):
            return fail("incidence", "a fixed geodesic misses its pentagon corner")
        polygon = domain_polygon(gen)
    except VeechKitError as exc:
        return fail("incidence", f"pentagon construction failed: {exc}")
    steps.append(CertStep(
        "incidence",
        "fixed geodesics of the reflections close into a pentagon",
        tuple((name, str(v)) for name, v in sorted(vertices.items())),
        True,
    ))

    try:
        angles = polygon.interior_angles()
    except VeechKitError as exc:
        return fail("angles", f"corner angle not recognized: {exc}")
    for theta in angles:
        if theta.k and theta.k.numerator != 1:
            return fail("angles", "a mirror corner is not of the form pi/m")
    ideal = sum(1 for v in polygon.vertices if isinstance(v, BoundaryPoint))
    # each finite corner's adjacent reflections must compose to an elliptic
    # rotation by twice that corner: trace^2 = 4 cos^2(theta); at a right
    # angle this is the zero-trace test
    refl_of_side = {"AB": gen.R_AB, "BC": gen.R_BC, "CD": gen.R_CD,
                    "DE": gen.R_DE, "EA": gen.R_AE}
    n = len(_SIDE_ORDER)
    elliptic_ok = True
    for i, theta in enumerate(angles):
        if not theta.k:
            continue
        r_prev = refl_of_side[_SIDE_ORDER[(i - 1) % n]].m
        r_next = refl_of_side[_SIDE_ORDER[i]].m
        tr = (r_prev * r_next).trace()
        k12 = theta.k * 12
        cos2 = (1 + cos_of_sixths(int(k12))) / 2
        if tr * tr != 4 * cos2:
            elliptic_ok = False
    steps.append(CertStep(
        "angles",
        "pentagon corners are pi/m wedges (ideal corners are cusps), and "
        "the adjacent reflections compose to the matching elliptic rotation",
        tuple((f"angle_{name}", str(theta)) for name, theta in
              zip([s_[0] for s_ in _SIDE_ORDER], angles)),
        elliptic_ok,
    ))
    if not elliptic_ok:
        return CertificateReport(tuple(steps), "INCONCLUSIVE", "angles")

    cone_angles = tuple(theta.times(2) for theta in angles if theta.k and theta.times(2).k != 2)
    orbifold = OrbifoldData(genus=0, punctures=ideal, cone_angles=cone_angles)
    try:
        area_g = gauss_bonnet_area(orbifold)
        area_polygon = polygon_area(polygon)
    except NonHyperbolic as exc:
        return fail("area", str(exc))
    if area_polygon.times(2) != area_g:
        return fail("area", "doubled pentagon area disagrees with the orbifold signature")
    steps.append(CertStep(
        "area",
        "reflection-quotient orbifold: genus 0, one puncture per ideal "
        "corner, cone angle twice each mirror corner",
        (
            ("orbifold", f"genus 0, punctures {ideal}, cones "
                         + ", ".join(str(c) for c in cone_angles)),
            ("area", str(area_g)),
            ("pentagon_area", str(area_polygon)),
        ),
        True,
    ))

    try:
        cusps = {
            name: cusp_invariants(s, direction, budget)
            for name, direction in gen.cusp_directions().items()
        }
    except VeechKitError as exc:
        return fail("cusps", f"cusp invariants failed: {exc}")
    seen = []
    for name, inv in sorted(cusps.items()):
        key = (inv.modulus_ratio, inv.width_ratios)
        if key in seen:
            return fail("cusps", f"cusp {name} shares its invariants with another cusp")
        seen.append(key)
    steps.append(CertStep(
        "cusps",
        "modulus ratios and width ratios separate the three cusps, so no "
        "two punctures can map together under a covering",
        tuple(
            (f"cusp_{name}", f"modulus ratio {inv.modulus_ratio}, widths "
                             + ", ".join(str(w) for w in inv.width_ratios))
            for name, inv in sorted(cusps.items())
        ),
        True,
    ))

    min_cone = min((theta for theta in cone_angles), key=lambda t: t.k, default=None)
    if min_cone is None:
        return fail("bound", "no cone point available for the area bound")
    bound = AngleMultiple(Fraction(2 * (ideal - 2)) + (2 - min_cone.k))
    ratio = area_g.k / bound.k
    ok = ratio < 2
    steps.append(CertStep(
        "bound",
        "any larger quotient keeps the punctures and a cone angle at most "
        "the smallest one here, so its area is at least the bound; the "
        "covering degree is the area ratio",
        (
            ("min_cone_angle", str(min_cone)),
            ("area_lower_bound", str(bound)),
            ("degree_ratio", f"{ratio} = {area_g}/{bound}"),
            ("ratio_below_two", str(ok)),
        ),
        ok,
    ))
    if not ok:
        return CertificateReport(tuple(steps), "INCONCLUSIVE", "bound")

    has_reversing = gen.R_AB.det() == -1
    steps.append(CertStep(
        "index",
        "integer covering degree below 2 is 1: the orientation-preserving "
        "groups agree, and both groups contain orientation-reversing "
        "elements, so the full groups agree",
        (("index", "1"), ("orientation_reversing_present", str(has_reversing))),
        has_reversing,
    ))
    if not has_reversing:
        return CertificateReport(tuple(steps), "INCONCLUSIVE", "index")
    return CertificateReport(tuple(steps), "LATTICE_CONFIRMED")
