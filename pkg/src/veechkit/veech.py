"""Generators of the affine automorphism group, assembled and certified.

The pipeline derives everything from the surface itself: the two mirror
reflections come from the Euclidean symmetry group, the three parabolics
from cylinder decompositions, and the remaining reflections from the
compositions parabolic-after-mirror.  Nothing is hard-coded; membership of
every element is certified by canonical-form equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .cylinders import (
    Direction,
    commensurability_class,
    decompose,
    parabolic_for_direction,
    width_ratio_invariant,
    DEFAULT_BUDGET,
)
from .errors import (
    IncommensurableModuli,
    MembershipFailed,
    NotAReflection,
    NotUnimodular,
)
from .field import FieldElem, Mat2, Vec2
from .surface import (
    TranslationSurface,
    apply_matrix,
    euclidean_isometry_group,
    is_translation_equivalent,
)


@dataclass(frozen=True)
class GroupElement:
    """A derivative of an affine automorphism, with its derivation route."""

    m: Mat2
    provenance: str  # euclidean | parabolic | composition

    def det(self) -> FieldElem:
        return self.m.det()

    def trace(self) -> FieldElem:
        return self.m.trace()

    def __str__(self):
        return f"{self.m} ({self.provenance})"


def _as_mat(g) -> Mat2:
    return g.m if isinstance(g, GroupElement) else g


@dataclass(frozen=True)
class GeneratorSet:
    """The five side reflections, -I, and the three generating parabolics.

    The naming follows the fundamental-domain pentagon ABCDE: R_XY is the
    reflection whose fixed geodesic carries the side XY, and P_X the
    parabolic fixing the cusp X."""

    R_AB: GroupElement
    R_AE: GroupElement
    R_BC: GroupElement
    R_CD: GroupElement
    R_DE: GroupElement
    minus_I: GroupElement
    P_B: GroupElement
    P_E: GroupElement
    P_D: GroupElement
    dir_B: Direction
    dir_E: Direction
    dir_D: Direction

    def reflections(self) -> Dict[str, GroupElement]:
        return {
            "R_AB": self.R_AB,
            "R_AE": self.R_AE,
            "R_BC": self.R_BC,
            "R_CD": self.R_CD,
            "R_DE": self.R_DE,
        }

    def parabolics(self) -> Dict[str, GroupElement]:
        return {"P_B": self.P_B, "P_E": self.P_E, "P_D": self.P_D}

    def all_named(self) -> Dict[str, GroupElement]:
        out = dict(self.reflections())
        out["minus_I"] = self.minus_I
        out.update(self.parabolics())
        return out

    def cusp_directions(self) -> Dict[str, Direction]:
        return {"B": self.dir_B, "E": self.dir_E, "D": self.dir_D}


@dataclass(frozen=True)
class CuspInvariant:
    """Affine invariants of a periodic direction: they separate cusps."""

    modulus_ratio: Fraction
    width_ratios: Tuple[FieldElem, ...]


def verify_membership(s: TranslationSurface, g) -> bool:
    """True iff the matrix is the derivative of an affine automorphism of s."""
    mat = _as_mat(g)
    det = mat.det()
    if det != 1 and det != -1:
        raise NotUnimodular(f"determinant {det} is not +-1")
    return is_translation_equivalent(apply_matrix(mat, s), s)


def right_angle_check(r1, r2) -> bool:
    """Whether the fixed geodesics of two reflections meet at a right angle.

    Zero trace of the product characterizes perpendicular mirrors."""
    m1, m2 = _as_mat(r1), _as_mat(r2)
    for m in (m1, m2):
        if m.det() != -1:
            raise NotAReflection(f"{m} has determinant {m.det()}, not -1")
    return (m1 * m2).trace() == 0


def mirror_direction(r: Mat2) -> Vec2:
    """Fixed (+1 eigenvector) direction of an orthogonal reflection."""
    one = FieldElem.of(1, r.disc)
    v = Vec2(r.a + one, r.c)
    if not v:
        v = Vec2(r.b, one - r.a)
    return v


def eigendirections(m: Mat2) -> Tuple[Vec2, Vec2]:
    """Eigendirections of a determinant -1, trace 0 matrix (+1 then -1)."""
    out = []
    for eig in (1, -1):
        p, q = m.a - eig, m.b
        if not p and not q:
            p, q = m.c, m.d_ - eig
        out.append(Vec2(q, -p))
    return out[0], out[1]


def build_generators(s: TranslationSurface, budget: int = DEFAULT_BUDGET) -> GeneratorSet:
    """Derive the generator set of the affine automorphism group of s.

    Expects a surface whose Euclidean group contains the horizontal mirror
    and one more reflection, and whose induced directions decompose into
    commensurably-moduled cylinders (the unfolded (1,4,7)/12 triangle and
    its affine images do)."""
    d = s.field_d
    east = Vec2.of(1, 0, d)
    group = euclidean_isometry_group(s)
    reflections = [m for m in group if m.det() == -1]

    r_ab = None
    for m in reflections:
        if m.apply(east) == east:
            r_ab = m
            break
    if r_ab is None:
        raise MembershipFailed("no reflection with a horizontal mirror preserves the surface")

    best = None
    for m in reflections:
        v = mirror_direction(m)
        if not v.x:
            continue
        slope = v.y / v.x
        if slope.sign() <= 0:
            continue
        if best is None or slope < best[0]:
            best = (slope, m)
    if best is None:
        raise MembershipFailed("no reflection with a positive mirror slope preserves the surface")
    r_ae = best[1]

    dir_b = Direction.horizontal(d)
    dir_e = Direction.of(mirror_direction(r_ae))
    p_b = parabolic_for_direction(s, dir_b, budget)
    r_bc = p_b * r_ab
    p_e = parabolic_for_direction(s, dir_e, budget)
    r_de = r_ae * p_e

    plus_dir, minus_dir = eigendirections(r_de)
    dir_d = Direction.of(minus_dir)
    if dir_d == dir_e:
        dir_d = Direction.of(plus_dir)
    p_d = parabolic_for_direction(s, dir_d, budget)
    r_cd = r_de * p_d

    minus_i = -Mat2.identity(d)
    named = {
        "R_AB": GroupElement(r_ab, "euclidean"),
        "R_AE": GroupElement(r_ae, "euclidean"),
        "R_BC": GroupElement(r_bc, "composition"),
        "R_CD": GroupElement(r_cd, "composition"),
        "R_DE": GroupElement(r_de, "composition"),
        "minus_I": GroupElement(minus_i, "euclidean"),
        "P_B": GroupElement(p_b, "parabolic"),
        "P_E": GroupElement(p_e, "parabolic"),
        "P_D": GroupElement(p_d, "parabolic"),
    }
    for name, g in named.items():
        if not verify_membership(s, g):
            raise MembershipFailed(f"{name} = {g.m} failed surface-equivalence verification")
    return GeneratorSet(
        R_AB=named["R_AB"], R_AE=named["R_AE"], R_BC=named["R_BC"],
        R_CD=named["R_CD"], R_DE=named["R_DE"], minus_I=named["minus_I"],
        P_B=named["P_B"], P_E=named["P_E"], P_D=named["P_D"],
        dir_B=dir_b, dir_E=dir_e, dir_D=dir_d,
    )


def is_dihedral_group(mats: List[Mat2]) -> bool:
    """Check a finite list of +-1 determinant matrices forms a dihedral group.

    Requires closure, n rotations forming a cyclic group, n reflections
    inverting the rotations by conjugation (n = len / 2 >= 1)."""
    group = set(mats)
    if len(group) != len(mats) or len(group) % 2:
        return False
    ident = Mat2.identity(mats[0].disc)
    if ident not in group:
        return False
    for a in group:
        if a.inv() not in group:
            return False
        for b in group:
            if a * b not in group:
                return False
    rotations = {m for m in group if m.det() == 1}
    reflections = group - rotations
    if len(rotations) != len(reflections):
        return False
    n = len(rotations)
    generator_found = any(
        len({_mat_pow(r, k, ident) for k in range(n)}) == n for r in rotations
    )
    if not generator_found:
        return False
    for f in reflections:
        if f * f != ident:
            return False
        for r in rotations:
            if f * r * f != r.inv():
                return False
    return True


def _mat_pow(m: Mat2, k: int, ident: Mat2) -> Mat2:
    out = ident
    for _ in range(k):
        out = out * m
    return out


def cusp_invariants(s: TranslationSurface, direction, budget: int = DEFAULT_BUDGET) -> CuspInvariant:
    """Modulus ratio and width-ratio multiset of a periodic direction."""
    if not isinstance(direction, Direction):
        direction = Direction.of(direction)
    dec = decompose(s, direction, budget)
    if commensurability_class(dec) is None:
        raise IncommensurableModuli(f"moduli in direction {direction} are incommensurable")
    moduli = dec.moduli()
    top, bottom = max(moduli), min(moduli)
    from .field import is_rational_ratio

    ratio = is_rational_ratio(top, bottom)
    return CuspInvariant(ratio, tuple(width_ratio_invariant(dec)))
