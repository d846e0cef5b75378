"""Exact arithmetic in the real quadratic field Q(sqrt(d)).

Every coordinate, modulus and matrix entry in this package is an element
a + b*sqrt(d) with rational a, b, so all geometric predicates are decided
exactly.  The default discriminant d = 3 covers triangles whose corners are
multiples of pi/12.  Rationals are `fractions.Fraction` (always reduced,
positive denominator, arbitrary precision).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import RequiresExactRational, UnsupportedAngle

Rational = Fraction

_Scalar = Union[int, Fraction, "FieldElem"]


def _sgn(q) -> int:
    return (q > 0) - (q < 0)


def _is_square_free(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def rational_sqrt(q: Fraction) -> Optional[Fraction]:
    """Exact square root of a rational, or None if irrational."""
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class FieldElem:
    """The real number a + b*sqrt(d), with sign/comparison decided exactly."""

    a: Fraction
    b: Fraction
    d: int = 3

    def __post_init__(self):
        if not isinstance(self.a, Fraction):
            object.__setattr__(self, "a", Fraction(self.a))
        if not isinstance(self.b, Fraction):
            object.__setattr__(self, "b", Fraction(self.b))
        if not _is_square_free(self.d):
            raise ValueError(f"discriminant must be square-free and >= 2, got {self.d}")

    @staticmethod
    def of(value: _Scalar, d: int = 3) -> "FieldElem":
        if isinstance(value, FieldElem):
            return value
        return FieldElem(Fraction(value), Fraction(0), d)

    def _coerce(self, other: _Scalar) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.d != self.d:
                raise ValueError(f"field mismatch: sqrt({self.d}) vs sqrt({other.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElem(Fraction(other), Fraction(0), self.d)
        return NotImplemented

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(o.a - self.a, o.b - self.b, self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(
            self.a * o.a + self.d * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(-self.a, -self.b, self.d)

    def inverse(self) -> "FieldElem":
        norm = self.a * self.a - self.d * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("field element is zero")
        return FieldElem(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = FieldElem.of(1, self.d)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- order and predicates -----------------------------------------------

    def sign(self) -> int:
        """Sign under the embedding with sqrt(d) > 0, computed exactly."""
        if self.b == 0:
            return _sgn(self.a)
        if self.a == 0:
            return _sgn(self.b)
        sa = _sgn(self.a)
        if sa == _sgn(self.b):
            return sa
        # opposite signs: compare a^2 against d*b^2
        cmp = _sgn(self.a * self.a - self.d * self.b * self.b)
        if cmp == 0:
            raise ArithmeticError("sqrt(d) cannot be rational for square-free d")
        return sa * cmp

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __lt__(self, other):
        return (self - self._coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - self._coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - self._coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - self._coerce(other)).sign() >= 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, FieldElem):
            return self.d == other.d and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> "FieldElem":
        return FieldElem(self.a, -self.b, self.d)

    def approx(self) -> float:
        """Double-precision approximation; for rendering and oracles only."""
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def sqrt(self) -> Optional["FieldElem"]:
        """Exact square root inside the field, or None if there is none."""
        if self.sign() < 0:
            return None
        if self.b == 0:
            r = rational_sqrt(self.a)
            if r is not None:
                return FieldElem(r, Fraction(0), self.d)
            r = rational_sqrt(self.a / self.d)
            if r is not None:
                return FieldElem(Fraction(0), r, self.d)
            return None
        # (p + q*sqrt(d))^2 = a + b*sqrt(d)  =>  p^2 = (a +- t)/2 with
        # t = sqrt(a^2 - d b^2) rational, q = b/(2p).
        disc = self.a * self.a - self.d * self.b * self.b
        t = rational_sqrt(disc)
        if t is None:
            return None
        for sign_ in (1, -1):
            p2 = (self.a + sign_ * t) / 2
            p = rational_sqrt(p2)
            if p is not None and p != 0:
                q = self.b / (2 * p)
                cand = FieldElem(p, q, self.d)
                if cand.sign() < 0:
                    cand = -cand
                if cand * cand == self:
                    return cand
        return None

    # -- formatting -----------------------------------------------------------

    def canonical_str(self) -> str:
        """Round-trippable form  p/q+r/s*sqrt(d)  (sign folded into r)."""
        sep = "+" if self.b >= 0 else "-"
        babs = abs(self.b)
        return (
            f"{self.a.numerator}/{self.a.denominator}{sep}"
            f"{babs.numerator}/{babs.denominator}*sqrt({self.d})"
        )

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        surd = f"sqrt({self.d})" if abs(self.b) == 1 else f"{abs(self.b)}*sqrt({self.d})"
        if self.a == 0:
            return surd if self.b > 0 else f"-{surd}"
        sep = "+" if self.b > 0 else "-"
        return f"{self.a}{sep}{surd}"

    def __repr__(self):
        return f"FieldElem({self})"


def is_rational_ratio(x: FieldElem, y: FieldElem) -> Optional[Fraction]:
    """Return x/y when that ratio is rational, else None.  Requires y != 0."""
    y = x._coerce(y)
    if not y:
        raise ZeroDivisionError("ratio with zero denominator")
    if y.a != 0:
        r = x.a / y.a
    elif y.b != 0:
        r = x.b / y.b
    else:  # pragma: no cover - guarded above
        raise ZeroDivisionError
    if x.a == r * y.a and x.b == r * y.b:
        return r
    return None


# -- parsing ------------------------------------------------------------------

_TERM_SURD = re.compile(
    r"^([+-]?)(?:(\d+(?:/\d+)?)\*)?sqrt\((\d+)\)(?:/(\d+))?$"
)
_TERM_RATIONAL = re.compile(r"^([+-]?\d+(?:/\d+)?)$")


def parse_field_elem(text: str, d: Optional[int] = None) -> FieldElem:
    """Parse surd syntax like ``10+6*sqrt(3)``, ``-11/2-7/2*sqrt(3)``,
    ``sqrt(3)/2`` or ``7/2``.  Decimal literals are rejected."""
    s = text.replace(" ", "")
    if not s:
        raise RequiresExactRational("empty field-element literal")
    if re.search(r"\d\.\d|\.\d|\d\.", s) or "e" in s.lower().replace("sqrt", ""):
        raise RequiresExactRational(
            f"decimal literal {text!r}; use exact syntax like 1/2 or 2-sqrt(3)"
        )
    # split into signed terms, keeping signs attached
    terms = re.findall(r"[+-]?[^+-]+", s)
    if "".join(terms) != s:
        raise RequiresExactRational(f"cannot parse field element {text!r}")
    a = Fraction(0)
    b = Fraction(0)
    seen_d = None
    for term in terms:
        m = _TERM_SURD.match(term)
        if m:
            sign_, coeff, arg, den = m.groups()
            td = int(arg)
            if seen_d is not None and td != seen_d:
                raise RequiresExactRational(f"mixed radicands in {text!r}")
            seen_d = td
            c = Fraction(coeff) if coeff else Fraction(1)
            if den:
                c /= int(den)
            b += -c if sign_ == "-" else c
            continue
        m = _TERM_RATIONAL.match(term)
        if m:
            a += Fraction(m.group(1))
            continue
        raise RequiresExactRational(f"cannot parse term {term!r} in {text!r}")
    if seen_d is not None and d is not None and seen_d != d:
        raise RequiresExactRational(
            f"radicand sqrt({seen_d}) does not match field sqrt({d})"
        )
    return FieldElem(a, b, seen_d if seen_d is not None else (d if d is not None else 3))


# -- planar vectors -------------------------------------------------------------


@dataclass(frozen=True)
class Vec2:
    """Planar vector over the field."""

    x: FieldElem
    y: FieldElem

    @staticmethod
    def of(x: _Scalar, y: _Scalar, d: int = 3) -> "Vec2":
        return Vec2(FieldElem.of(x, d), FieldElem.of(y, d))

    @property
    def d(self) -> int:
        return self.x.d

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def scale(self, c: _Scalar) -> "Vec2":
        return Vec2(self.x * c, self.y * c)

    def dot(self, other: "Vec2") -> FieldElem:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Vec2") -> FieldElem:
        return self.x * other.y - self.y * other.x

    def norm2(self) -> FieldElem:
        return self.dot(self)

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    def approx(self) -> tuple:
        return (self.x.approx(), self.y.approx())

    def __str__(self):
        return f"({self.x}, {self.y})"

    __repr__ = __str__


# -- 2x2 matrices ----------------------------------------------------------------


@dataclass(frozen=True)
class Mat2:
    """Row-major 2x2 matrix over the field."""

    a: FieldElem
    b: FieldElem
    c: FieldElem
    d_: FieldElem

    @staticmethod
    def of(a, b, c, d, disc: int = 3) -> "Mat2":
        return Mat2(
            FieldElem.of(a, disc), FieldElem.of(b, disc),
            FieldElem.of(c, disc), FieldElem.of(d, disc),
        )

    @staticmethod
    def identity(disc: int = 3) -> "Mat2":
        return Mat2.of(1, 0, 0, 1, disc)

    @staticmethod
    def reflection_across(v: Vec2) -> "Mat2":
        """Reflection of the plane across the line through the origin along v."""
        n2 = v.norm2()
        if not n2:
            raise ZeroDivisionError("cannot reflect across the zero vector")
        return Mat2(
            (v.x * v.x - v.y * v.y) / n2, (2 * v.x * v.y) / n2,
            (2 * v.x * v.y) / n2, (v.y * v.y - v.x * v.x) / n2,
        )

    @property
    def disc(self) -> int:
        return self.a.d

    def row(self, i: int) -> tuple:
        return (self.a, self.b) if i == 0 else (self.c, self.d_)

    def __mul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d_,
            self.c * other.a + self.d_ * other.c,
            self.c * other.b + self.d_ * other.d_,
        )

    def apply(self, v: Vec2) -> Vec2:
        return Vec2(self.a * v.x + self.b * v.y, self.c * v.x + self.d_ * v.y)

    def det(self) -> FieldElem:
        return self.a * self.d_ - self.b * self.c

    def trace(self) -> FieldElem:
        return self.a + self.d_

    def inv(self) -> "Mat2":
        det = self.det()
        if not det:
            raise ZeroDivisionError("matrix is singular")
        return Mat2(self.d_ / det, -self.b / det, -self.c / det, self.a / det)

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d_)

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d_)

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d_}]]"

    __repr__ = __str__


# -- exact angle bookkeeping ------------------------------------------------------


@dataclass(frozen=True, order=True)
class AngleMultiple:
    """The angle k*pi for an exact rational k."""

    k: Fraction

    def __post_init__(self):
        if not isinstance(self.k, Fraction):
            object.__setattr__(self, "k", Fraction(self.k))

    @staticmethod
    def of(num, den=1) -> "AngleMultiple":
        return AngleMultiple(Fraction(num, den))

    def __add__(self, other: "AngleMultiple") -> "AngleMultiple":
        return AngleMultiple(self.k + other.k)

    def __sub__(self, other: "AngleMultiple") -> "AngleMultiple":
        return AngleMultiple(self.k - other.k)

    def __neg__(self) -> "AngleMultiple":
        return AngleMultiple(-self.k)

    def times(self, m) -> "AngleMultiple":
        return AngleMultiple(self.k * Fraction(m))

    def approx(self) -> float:
        return float(self.k) * math.pi

    def __str__(self):
        if self.k == 0:
            return "0"
        if self.k == 1:
            return "pi"
        return f"{self.k}*pi"

    __repr__ = __str__


TWO_PI = AngleMultiple.of(2)
PI = AngleMultiple.of(1)


def _tan_twelfths() -> dict:
    """tan(k*pi/12) for k = 0..5 as elements of Q(sqrt(3))."""
    f = Fraction
    return {
        0: FieldElem(f(0), f(0)),
        1: FieldElem(f(2), f(-1)),          # 2 - sqrt(3)
        2: FieldElem(f(0), f(1, 3)),        # sqrt(3)/3
        3: FieldElem(f(1), f(0)),
        4: FieldElem(f(0), f(1)),           # sqrt(3)
        5: FieldElem(f(2), f(1)),           # 2 + sqrt(3)
    }


_TAN12 = _tan_twelfths()
_SLOPE_TO_TWELFTH = {}
for _k, _t in _TAN12.items():
    _SLOPE_TO_TWELFTH[_t] = _k
    if _k:
        _SLOPE_TO_TWELFTH[-_t] = 12 - _k


def tan_of_twelfths(k: int) -> Optional[FieldElem]:
    """tan(k*pi/12) in Q(sqrt(3)), or None for vertical (k = 6 mod 12)."""
    k %= 12
    if k == 6:
        return None
    return _TAN12[k] if k < 6 else -_TAN12[12 - k]


def cos_of_sixths(k: int) -> FieldElem:
    """cos(k*pi/6) in Q(sqrt(3))."""
    f = Fraction
    half = [
        FieldElem(f(1), f(0)),
        FieldElem(f(0), f(1, 2)),   # sqrt(3)/2
        FieldElem(f(1, 2), f(0)),
        FieldElem(f(0), f(0)),
        FieldElem(f(-1, 2), f(0)),
        FieldElem(f(0), f(-1, 2)),
        FieldElem(f(-1), f(0)),
    ]
    k %= 12
    return half[k] if k <= 6 else half[12 - k]


def direction_twelfths(v: Vec2) -> int:
    """Angle of the nonzero vector v as a multiple of pi/12, in 0..23.

    Raises UnsupportedAngle when the direction is off the pi/12 grid or the
    field is not Q(sqrt(3))."""
    if not v:
        raise ValueError("zero vector has no direction")
    if v.d != 3:
        raise UnsupportedAngle(f"angle grid is only available over sqrt(3), not sqrt({v.d})")
    if not v.x:
        k_line = 6
    else:
        slope = v.y / v.x
        k_line = _SLOPE_TO_TWELFTH.get(slope)
        if k_line is None:
            raise UnsupportedAngle(f"direction {v} is not a multiple of pi/12")
    upper = v.y.sign() > 0 or (v.y.sign() == 0 and v.x.sign() > 0)
    return k_line if upper else k_line + 12


def corner_angle(u: Vec2, w: Vec2) -> AngleMultiple:
    """Counterclockwise angle from ray u to ray w, in [0, 2*pi)."""
    ku = direction_twelfths(u)
    kw = direction_twelfths(w)
    return AngleMultiple(Fraction((kw - ku) % 24, 12))
