"""Exact elliptic-curve arithmetic in long Weierstrass form.

Curves live either over the rationals (coefficients are Fractions) or over
a prime field F_p (coefficients are ints mod p); one chord-tangent
implementation covers both.  Points are affine ``(x, y)`` pairs, with
``None`` standing for the point at infinity.  The module also houses the
bridge from the ECHO sequence to odd multiples of the base point
P = (4, 7) on E: y^2 + y = x^3 - 3x + 4, and the normal-form reduction
that moves an arbitrary curve/point pair to y^2 + axy + by = x^3 + bx^2
with the point at the origin.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import seq

FieldElem = Union[int, Fraction]
Point = Optional[tuple]  # (x, y) affine, or None for the point at infinity

INFINITY: Point = None


class SingularCurveError(ValueError):
    """Operation needs a non-singular curve."""


class NonIntegralModelError(ValueError):
    """Coefficient denominator vanishes mod p; reduce an integral model instead."""


@dataclass(frozen=True)
class Curve:
    """y^2 + a1*xy + a3*y = x^3 + a2*x^2 + a4*x + a6 over Q (p=None) or F_p."""

    a1: FieldElem
    a2: FieldElem
    a3: FieldElem
    a4: FieldElem
    a6: FieldElem
    p: Optional[int] = None

    def __post_init__(self):
        if self.p is None:
            for name in ("a1", "a2", "a3", "a4", "a6"):
                object.__setattr__(self, name, Fraction(getattr(self, name)))
        else:
            for name in ("a1", "a2", "a3", "a4", "a6"):
                object.__setattr__(self, name, int(getattr(self, name)) % self.p)

    # standard quantities b2, b4, b6, b8, c4, and the discriminant
    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        if self.p is not None:
            b2, b4, b6, b8 = (v % self.p for v in (b2, b4, b6, b8))
        return b2, b4, b6, b8

    def discriminant(self) -> FieldElem:
        b2, b4, b6, b8 = self.b_invariants()
        d = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        return d % self.p if self.p is not None else d

    def c4(self) -> FieldElem:
        b2, b4, _, _ = self.b_invariants()
        c = b2 * b2 - 24 * b4
        return c % self.p if self.p is not None else c

    def j_invariant(self) -> FieldElem:
        disc = self.discriminant()
        if disc == 0:
            raise SingularCurveError("j-invariant of a singular curve")
        c4 = self.c4()
        if self.p is None:
            return Fraction(c4**3, disc)
        return c4**3 * pow(disc, -1, self.p) % self.p

    def is_singular(self) -> bool:
        return self.discriminant() == 0

    def contains(self, pt: Point) -> bool:
        if pt is None:
            return True
        x, y = self._norm(pt[0]), self._norm(pt[1])
        lhs = y * y + self.a1 * x * y + self.a3 * y
        rhs = x**3 + self.a2 * x * x + self.a4 * x + self.a6
        if self.p is not None:
            return (lhs - rhs) % self.p == 0
        return lhs == rhs

    def _norm(self, v: FieldElem) -> FieldElem:
        return int(v) % self.p if self.p is not None else Fraction(v)

    def _inv(self, v: FieldElem) -> FieldElem:
        if self.p is None:
            return Fraction(1) / v
        try:
            return pow(int(v), -1, self.p)
        except ValueError as e:
            raise ValueError(f"{v} not invertible mod {self.p} (composite modulus?)") from e


# The curve and point the sequence is tied to.
CURVE_E = Curve(0, 0, 1, -3, 4)
POINT_P: Point = (Fraction(4), Fraction(7))


def negate(pt: Point, c: Curve) -> Point:
    if pt is None:
        return None
    x, y = pt
    ny = -y - c.a1 * x - c.a3
    return (c._norm(x), c._norm(ny))


def add(pt1: Point, pt2: Point, c: Curve) -> Point:
    """Chord-tangent sum; the third intersection reflected by y -> -y-a1*x-a3."""
    if pt1 is None:
        return pt2
    if pt2 is None:
        return pt1
    x1, y1 = c._norm(pt1[0]), c._norm(pt1[1])
    x2, y2 = c._norm(pt2[0]), c._norm(pt2[1])
    if x1 == x2:
        vertical = y1 + y2 + c.a1 * x1 + c.a3
        if (vertical % c.p if c.p is not None else vertical) == 0:
            return None
        num = 3 * x1 * x1 + 2 * c.a2 * x1 + c.a4 - c.a1 * y1
        den = 2 * y1 + c.a1 * x1 + c.a3
    else:
        num = y2 - y1
        den = x2 - x1
    lam = num * c._inv(den)
    x3 = lam * lam + c.a1 * lam - c.a2 - x1 - x2
    y3 = lam * (x1 - x3) - y1 - c.a1 * x3 - c.a3
    return (c._norm(x3), c._norm(y3))


def scalar_mul(n: int, pt: Point, c: Curve) -> Point:
    """n*pt by double-and-add; n may be zero or negative."""
    if n < 0:
        return scalar_mul(-n, negate(pt, c), c)
    acc: Point = None
    run = pt
    while n:
        if n & 1:
            acc = add(acc, run, c)
        run = add(run, run, c)
        n >>= 1
    return acc


def reduce_mod_p(c: Curve, p: int) -> tuple[Curve, bool]:
    """Reduce a rational curve mod p; good = (discriminant nonzero mod p)."""
    if c.p is not None:
        raise ValueError("curve is already over a prime field")
    coeffs = []
    for v in (c.a1, c.a2, c.a3, c.a4, c.a6):
        v = Fraction(v)
        if v.denominator % p == 0:
            raise NonIntegralModelError(f"coefficient {v} has denominator divisible by {p}")
        coeffs.append(v.numerator * pow(v.denominator, -1, p) % p)
    cp = Curve(*coeffs, p=p)
    return cp, cp.discriminant() % p != 0


def reduce_point_mod_p(pt: Point, p: int) -> Point:
    """Reduce an affine rational point mod p (denominators must be units)."""
    if pt is None:
        return None
    out = []
    for v in pt:
        v = Fraction(v)
        if v.denominator % p == 0:
            return None  # reduces to the point at infinity
        out.append(v.numerator * pow(v.denominator, -1, p) % p)
    return tuple(out)


@dataclass(frozen=True)
class OddMultiple:
    """Coordinates of (2n+1)*P on E as x = x_num/b_n^2, y = y_num/b_n^3."""

    n: int
    x_num: int
    y_num: int
    denom_base: int

    def as_point(self) -> Point:
        b = self.denom_base
        return (Fraction(self.x_num, b * b), Fraction(self.y_num, b**3))


def odd_multiple_coords(n: int) -> OddMultiple:
    """Closed-form coordinates of (2n+1)*P from sequence terms.

    x-numerator: 2*b_n^2 - b_{n-3}*b_{n+3}; the y-numerator picks a factor
    1, 3 or 9 according to n mod 3.  Both fractions arrive already reduced
    because consecutive terms are coprime.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    b = seq.term
    bn = b(n)
    g = 2 * bn * bn - b(n - 3) * b(n + 3)
    factor = {0: 3, 1: 1, 2: 9}[n % 3]
    f = bn**3 + factor * b(n - 1) ** 2 * b(n + 2)
    return OddMultiple(n, g, f, bn)


class TateNormalFormError(ValueError):
    """The marked point is too small (p, 2p or 3p is the identity)."""


@dataclass(frozen=True)
class TateMap:
    """Substitution chain x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.

    Applies the inverse change of variables, mapping points of the source
    curve to points of the normal-form curve.
    """

    r: Fraction
    s: Fraction
    t: Fraction
    u: Fraction

    def apply(self, pt: Point) -> Point:
        if pt is None:
            return None
        x, y = Fraction(pt[0]), Fraction(pt[1])
        xs = x - self.r
        ys = y - self.s * xs - self.t
        u2 = self.u * self.u
        return (xs / u2, ys / (u2 * self.u))


def _translate(c: Curve, r: Fraction, t: Fraction) -> Curve:
    # x = x' + r, y = y' + t
    a1, a2, a3, a4, a6 = c.a1, c.a2, c.a3, c.a4, c.a6
    return Curve(
        a1,
        a2 + 3 * r,
        a3 + r * a1 + 2 * t,
        a4 + 2 * r * a2 - t * a1 + 3 * r * r,
        a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1,
    )


def _shear(c: Curve, s: Fraction) -> Curve:
    # y = y' + s*x
    a1, a2, a3, a4, a6 = c.a1, c.a2, c.a3, c.a4, c.a6
    return Curve(a1 + 2 * s, a2 - s * a1 - s * s, a3, a4 - s * a3, a6)


def _scale(c: Curve, u: Fraction) -> Curve:
    a1, a2, a3, a4, a6 = c.a1, c.a2, c.a3, c.a4, c.a6
    return Curve(a1 / u, a2 / u**2, a3 / u**3, a4 / u**4, a6 / u**6)


def tate_normal_form(c: Curve, pt: Point) -> tuple[Fraction, Fraction, TateMap]:
    """Move (c, pt) to y^2 + a*xy + b*y = x^3 + b*x^2 with pt at (0, 0).

    Translate the point to the origin, shear away the linear x-term, then
    scale by u = a3/a2 to equalize a2 and a3.  The degenerate divisions
    correspond exactly to 2*pt or 3*pt being the identity.
    """
    if c.p is not None:
        raise ValueError("normal form is computed over the rationals")
    if pt is None or not c.contains(pt):
        raise ValueError("marked point must be an affine point on the curve")
    for k in (1, 2, 3):
        if scalar_mul(k, pt, c) is None:
            raise TateNormalFormError(f"{k}*pt is the point at infinity")
    r, t = Fraction(pt[0]), Fraction(pt[1])
    c1 = _translate(c, r, t)
    if c1.a3 == 0:
        raise TateNormalFormError("a3 vanished after translation (2*pt = infinity)")
    s = c1.a4 / c1.a3
    c2 = _shear(c1, s)
    if c2.a2 == 0:
        raise TateNormalFormError("a2 vanished after shearing (3*pt = infinity)")
    u = c2.a3 / c2.a2
    c3 = _scale(c2, u)
    assert c3.a4 == 0 and c3.a6 == 0 and c3.a2 == c3.a3
    return c3.a1, c3.a2, TateMap(r, s, t, u)


def curve_from_pair(a, b) -> Curve:
    """The normal-form curve y^2 + a*xy + b*y = x^3 + b*x^2 with marked (0,0)."""
    return Curve(Fraction(a), Fraction(b), Fraction(b), 0, 0)


def random_rational_points(count: int, rng) -> list[Point]:
    """Sample points n*P on E for group-law checks (n small, nonzero)."""
    return [scalar_mul(rng.randrange(1, 40), POINT_P, CURVE_E) for _ in range(count)]
