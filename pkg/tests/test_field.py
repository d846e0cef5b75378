"""Field arithmetic, exact predicates, parsing and matrices."""

from fractions import Fraction

import pytest

from veechkit.errors import RequiresExactRational, UnsupportedAngle
from veechkit.field import (
    AngleMultiple,
    FieldElem,
    Mat2,
    Vec2,
    corner_angle,
    cos_of_sixths,
    direction_twelfths,
    is_rational_ratio,
    parse_field_elem,
    tan_of_twelfths,
)


def fe(text):
    return parse_field_elem(text)


class TestArithmetic:
    def test_conjugate_product(self):
        assert fe("1+sqrt(3)") * fe("1-sqrt(3)") == fe("-2")

    def test_inverse_of_modulus_base(self):
        x = fe("5+3*sqrt(3)")
        assert x * x.inverse() == 1

    def test_modulus_pair_ratio_is_two(self):
        assert fe("10+6*sqrt(3)") / fe("5+3*sqrt(3)") == 2

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            fe("1") / fe("0")

    def test_power(self):
        x = fe("1+sqrt(3)")
        assert x ** 4 == x * x * x * x
        assert x ** -2 == (x * x).inverse()

    def test_mixed_scalar_arithmetic(self):
        x = fe("2-sqrt(3)")
        assert 1 + x == fe("3-sqrt(3)")
        assert 2 * x == fe("4-2*sqrt(3)")
        assert 1 - x == fe("-1+sqrt(3)")
        assert (1 / x) == fe("2+sqrt(3)")

    def test_field_mismatch_is_hard_fault(self):
        with pytest.raises(ValueError):
            FieldElem(Fraction(1), Fraction(1), 3) + FieldElem(Fraction(1), Fraction(1), 2)

    def test_non_square_free_discriminant_rejected(self):
        with pytest.raises(ValueError):
            FieldElem(Fraction(1), Fraction(0), 4)


class TestSign:
    def test_zero(self):
        assert fe("0").sign() == 0

    def test_slope_numerator_is_positive(self):
        # 3*sqrt(3) > 4 because 27 > 16
        assert fe("-4+3*sqrt(3)").sign() == 1

    def test_one_minus_sqrt3_is_negative(self):
        assert fe("1-sqrt(3)").sign() == -1

    def test_comparisons(self):
        assert fe("2-sqrt(3)") < fe("1/2")
        assert fe("1+sqrt(3)") > 2
        assert abs(fe("1-sqrt(3)")) == fe("-1+sqrt(3)")


class TestRationalRatio:
    def test_horizontal_moduli(self):
        big = fe("1") / fe("5+3*sqrt(3)")
        small = fe("1") / fe("10+6*sqrt(3)")
        assert is_rational_ratio(big, small) == 2

    def test_mirror_moduli(self):
        top = fe("3") / fe("6+4*sqrt(3)")
        bottom = fe("1") / fe("6+4*sqrt(3)")
        assert is_rational_ratio(top, bottom) == 3

    def test_irrational_ratio(self):
        assert is_rational_ratio(fe("1+sqrt(3)"), fe("2")) is None

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            is_rational_ratio(fe("1"), fe("0"))


class TestMatrices:
    def test_trace_of_reflection_product_vanishes(self):
        r_bc = Mat2(fe("1"), fe("-10-6*sqrt(3)"), fe("0"), fe("-1"))
        r_cd = Mat2(fe("5+3*sqrt(3)"), fe("-51-30*sqrt(3)"), fe("1"), fe("-5-3*sqrt(3)"))
        product = r_bc * r_cd
        assert product.trace() == 0
        assert product == Mat2(fe("-5-3*sqrt(3)"), fe("53+30*sqrt(3)"), fe("-1"), fe("5+3*sqrt(3)"))

    def test_reflection_determinant(self):
        assert Mat2.of(1, 0, 0, -1).det() == -1

    def test_identity_product(self):
        ident = Mat2.identity()
        assert ident * ident == ident

    def test_inverse(self):
        m = Mat2(fe("1"), fe("10+6*sqrt(3)"), fe("0"), fe("1"))
        assert m * m.inv() == Mat2.identity()

    def test_singular_inverse(self):
        with pytest.raises(ZeroDivisionError):
            Mat2.of(1, 1, 1, 1).inv()

    def test_reflection_across_vector(self):
        r = Mat2.reflection_across(Vec2.of(1, 0))
        assert r == Mat2.of(1, 0, 0, -1)
        v = Vec2(fe("1"), fe("2-sqrt(3)"))
        r2 = Mat2.reflection_across(v)
        assert r2.apply(v) == v
        assert r2.det() == -1


class TestSqrt:
    def test_rational_square(self):
        assert fe("9/4").sqrt() == fe("3/2")

    def test_multiple_of_sqrt3(self):
        assert fe("12").sqrt() == fe("2*sqrt(3)")

    def test_mixed_square(self):
        # (1 + sqrt(3))^2 = 4 + 2 sqrt(3)
        assert fe("4+2*sqrt(3)").sqrt() == fe("1+sqrt(3)")

    def test_non_square(self):
        assert fe("1+sqrt(3)").sqrt() is None

    def test_negative(self):
        assert fe("-4").sqrt() is None


class TestSerialization:
    def test_canonical_string_round_trip(self):
        x = fe("-11/2-7/2*sqrt(3)")
        assert parse_field_elem(x.canonical_str()) == x

    def test_canonical_format(self):
        assert fe("2").canonical_str() == "2/1+0/1*sqrt(3)"
        assert fe("1/2-3/4*sqrt(3)").canonical_str() == "1/2-3/4*sqrt(3)"

    def test_parse_variants(self):
        assert fe("sqrt(3)/2") == FieldElem(Fraction(0), Fraction(1, 2))
        assert fe("-sqrt(3)") == FieldElem(Fraction(0), Fraction(-1))
        assert fe("10+6*sqrt(3)") == FieldElem(Fraction(10), Fraction(6))

    def test_decimal_rejected(self):
        with pytest.raises(RequiresExactRational):
            parse_field_elem("0.5")

    def test_garbage_rejected(self):
        with pytest.raises(RequiresExactRational):
            parse_field_elem("2+x")

    def test_mismatched_radicand_rejected(self):
        with pytest.raises(RequiresExactRational):
            parse_field_elem("1+sqrt(2)", d=3)


class TestAngles:
    def test_tan_table(self):
        assert tan_of_twelfths(1) == fe("2-sqrt(3)")
        assert tan_of_twelfths(5) == fe("2+sqrt(3)")
        assert tan_of_twelfths(6) is None
        assert tan_of_twelfths(11) == fe("-2+sqrt(3)")

    def test_cos_table(self):
        assert cos_of_sixths(0) == 1
        assert cos_of_sixths(2) == fe("1/2")
        assert cos_of_sixths(3) == 0
        assert cos_of_sixths(9) == 0
        assert cos_of_sixths(10) == fe("-1/2")

    def test_direction_twelfths_quadrants(self):
        assert direction_twelfths(Vec2.of(1, 0)) == 0
        assert direction_twelfths(Vec2.of(0, 1)) == 6
        assert direction_twelfths(Vec2.of(-1, 0)) == 12
        assert direction_twelfths(Vec2.of(0, -1)) == 18
        assert direction_twelfths(Vec2(fe("1"), fe("2-sqrt(3)"))) == 1
        assert direction_twelfths(Vec2(fe("-1"), fe("-2+sqrt(3)"))) == 13

    def test_direction_off_grid(self):
        with pytest.raises(UnsupportedAngle):
            direction_twelfths(Vec2.of(3, 1))

    def test_corner_angle(self):
        quarter = corner_angle(Vec2.of(1, 0), Vec2.of(0, 1))
        assert quarter == AngleMultiple(Fraction(1, 2))
        reflex = corner_angle(Vec2.of(0, 1), Vec2.of(1, 0))
        assert reflex == AngleMultiple(Fraction(3, 2))

    def test_angle_arithmetic(self):
        a = AngleMultiple(Fraction(1, 6))
        assert a + a == AngleMultiple(Fraction(1, 3))
        assert a.times(14) == AngleMultiple(Fraction(7, 3))
        assert str(a.times(14)) == "7/3*pi"
