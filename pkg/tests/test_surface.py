"""Unfolding, cone points, affine images, canonical equivalence."""

from fractions import Fraction

import pytest

from veechkit.errors import InvalidSurface, InvalidTriangle, NotUnimodular, UnsupportedField
from veechkit.field import AngleMultiple, Mat2, Vec2, parse_field_elem as fe
from veechkit.surface import (
    EdgeRef,
    PlanarPolygon,
    TranslationSurface,
    apply_matrix,
    canonical_form,
    cone_points,
    euclidean_isometry_group,
    is_translation_equivalent,
    unfold_triangle,
)


@pytest.fixture(scope="module")
def delta():
    return unfold_triangle(1, 4, 7, 12)


def unit_square_torus():
    poly = PlanarPolygon((Vec2.of(0, 0), Vec2.of(1, 0), Vec2.of(1, 1), Vec2.of(0, 1)))
    gluings = {
        EdgeRef(0, 0): EdgeRef(0, 2), EdgeRef(0, 2): EdgeRef(0, 0),
        EdgeRef(0, 1): EdgeRef(0, 3), EdgeRef(0, 3): EdgeRef(0, 1),
    }
    return TranslationSurface([poly], gluings)


class TestPolygonValidation:
    def test_needs_ccw(self):
        with pytest.raises(InvalidSurface):
            PlanarPolygon((Vec2.of(0, 0), Vec2.of(0, 1), Vec2.of(1, 0)))

    def test_rejects_self_intersection(self):
        with pytest.raises(InvalidSurface):
            PlanarPolygon((Vec2.of(0, 0), Vec2.of(2, 2), Vec2.of(2, 0), Vec2.of(0, 2)))

    def test_rejects_collinear_corner(self):
        with pytest.raises(InvalidSurface):
            PlanarPolygon((Vec2.of(0, 0), Vec2.of(1, 0), Vec2.of(2, 0), Vec2.of(1, 1)))


class TestUnfold:
    def test_delta_counts(self, delta):
        assert len(delta.polygons) == 24
        report = cone_points(delta)
        assert report.genus == 4
        assert report.num_polygons == 24
        assert report.cone_angles == (
            (AngleMultiple(Fraction(14)), 1),
            (AngleMultiple(Fraction(2)), 5),
        )

    def test_right_isosceles_gives_torus(self):
        s = unfold_triangle(1, 1, 2, 4)
        report = cone_points(s)
        assert report.genus == 1
        assert report.singular() == ()

    def test_invalid_angles(self):
        with pytest.raises(InvalidTriangle):
            unfold_triangle(1, 4, 8, 12)
        with pytest.raises(InvalidTriangle):
            unfold_triangle(0, 5, 7, 12)

    def test_unsupported_denominator(self):
        with pytest.raises(UnsupportedField):
            unfold_triangle(1, 3, 4, 8)

    def test_gluing_translation_invariant(self, delta):
        for ref, partner in delta.gluings.items():
            v = delta.polygons[ref.polygon_index].edge_vec(ref.edge_index)
            w = delta.polygons[partner.polygon_index].edge_vec(partner.edge_index)
            assert not (v + w)

    def test_euler_relation(self, delta):
        report = cone_points(delta)
        excess = sum((a.k - 2) * m for a, m in report.cone_angles)
        assert excess == 2 * (2 * report.genus - 2)


class TestApplyMatrix:
    def test_identity(self, delta):
        assert apply_matrix(Mat2.identity(), delta) == delta

    def test_not_unimodular(self, delta):
        with pytest.raises(NotUnimodular):
            apply_matrix(Mat2.of(2, 0, 0, 1), delta)

    def test_minus_identity_preserves_delta(self, delta):
        image = apply_matrix(-Mat2.identity(), delta)
        assert is_translation_equivalent(image, delta)

    def test_orientation_reversing_repairs_polygons(self, delta):
        image = apply_matrix(Mat2.of(1, 0, 0, -1), delta)
        for poly in image.polygons:
            assert poly.signed_area2().sign() > 0
        assert is_translation_equivalent(image, delta)

    def test_composition_law(self, delta):
        a = Mat2.of(1, 1, 0, 1)
        b = Mat2.of(1, 0, 1, 1)
        left = apply_matrix(a, apply_matrix(b, delta))
        right = apply_matrix(a * b, delta)
        assert left.canonical_code() == right.canonical_code()


class TestCanonicalForm:
    def test_idempotent(self, delta):
        c = canonical_form(delta)
        assert canonical_form(c) == c

    def test_equivalent_to_itself(self, delta):
        assert is_translation_equivalent(delta, delta)

    def test_diagonal_deformation_differs(self, delta):
        stretched = apply_matrix(Mat2.of(2, 0, 0, fe("1/2")), delta)
        assert not is_translation_equivalent(stretched, delta)

    def test_polygon_translation_invariance(self, delta):
        polys = list(delta.polygons)
        polys[3] = polys[3].translate(Vec2.of(7, 13))
        moved = TranslationSurface(polys, delta.gluings)
        assert is_translation_equivalent(moved, delta)
        assert canonical_form(moved) == canonical_form(delta)

    def test_relabeling_invariance(self, delta):
        n = len(delta.polygons)
        perm = [(i + 5) % n for i in range(n)]  # new index of old polygon i
        polys = [None] * n
        for i, poly in enumerate(delta.polygons):
            polys[perm[i]] = poly
        gluings = {}
        for a, b in delta.gluings.items():
            gluings[EdgeRef(perm[a.polygon_index], a.edge_index)] = EdgeRef(
                perm[b.polygon_index], b.edge_index
            )
        relabeled = TranslationSurface(polys, gluings)
        assert canonical_form(relabeled) == canonical_form(delta)

    def test_split_square_matches_unit_torus(self):
        square = unit_square_torus()
        split = TranslationSurface(
            [
                PlanarPolygon((Vec2.of(0, 0), Vec2.of(1, 0), Vec2.of(1, 1))),
                PlanarPolygon((Vec2.of(0, 0), Vec2.of(1, 1), Vec2.of(0, 1))),
            ],
            {
                EdgeRef(0, 2): EdgeRef(1, 0), EdgeRef(1, 0): EdgeRef(0, 2),
                EdgeRef(0, 0): EdgeRef(1, 1), EdgeRef(1, 1): EdgeRef(0, 0),
                EdgeRef(0, 1): EdgeRef(1, 2), EdgeRef(1, 2): EdgeRef(0, 1),
            },
        )
        assert is_translation_equivalent(split, square)

    def test_marked_point_erasure(self):
        # the same torus with an extra marked vertex on an edge midpoint
        square = unit_square_torus()
        half = fe("1/2")
        poly = PlanarPolygon((
            Vec2.of(0, 0), Vec2(half, fe("0")), Vec2.of(1, 0),
            Vec2.of(1, 1), Vec2(half, fe("1")), Vec2.of(0, 1),
        ))
        gluings = {
            EdgeRef(0, 0): EdgeRef(0, 4), EdgeRef(0, 4): EdgeRef(0, 0),
            EdgeRef(0, 1): EdgeRef(0, 3), EdgeRef(0, 3): EdgeRef(0, 1),
            EdgeRef(0, 2): EdgeRef(0, 5), EdgeRef(0, 5): EdgeRef(0, 2),
        }
        marked = TranslationSurface([poly], gluings)
        assert is_translation_equivalent(marked, square)


class TestEuclideanGroup:
    def test_unit_square_torus_dihedral_order_8(self):
        group = euclidean_isometry_group(unit_square_torus())
        assert len(group) == 8
        from veechkit.veech import is_dihedral_group

        assert is_dihedral_group(group)

    def test_delta_group(self, delta):
        group = euclidean_isometry_group(delta)
        assert len(group) == 24
        r_ab = Mat2.of(1, 0, 0, -1)
        r_ae = Mat2(fe("1/2*sqrt(3)"), fe("1/2"), fe("1/2"), fe("-1/2*sqrt(3)"))
        assert r_ab in group
        assert r_ae in group
        assert -Mat2.identity() in group
        members = set(group)
        for a in group:
            assert a.inv() in members
            for b in group:
                assert a * b in members
