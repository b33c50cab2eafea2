"""Curves y² = x³ + a x² + b x + c over exact rings, division polynomials,
torsion certification, and elliptic schemes over the λ-line.

Coefficient rings are duck-typed: anything with +, -, *, ** and int
coercion works (Fraction, GFElement, CyclotomicNumber, TowerElement).
Torsion of a section point is decided from its x-coordinate and the cubic
value w = rhs(x) alone; the y-coordinate only ever enters through y² = w,
which keeps quadratic extensions out of the decision path.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Set, Tuple

import mpmath

from . import polynomials as pl
from .cyclotomic import factorize
from .errors import BadReductionError, ZeroDivisorSplit
from .extension import FieldTower, FiniteReduction, TowerElement, tower_component_gcd
from .finitefield import gp_gcd, gp_trim
from .ratfunc import RationalFunction, rational_roots


def _one_like(x):
    return (x - x) + 1


class WeierstrassCurve:
    __slots__ = ("a", "b", "c", "one", "zero", "_div_memo")

    def __init__(self, a, b, c):
        self.a = a
        self.b = b
        self.c = c
        self.zero = a - a
        self.one = self.zero + 1
        self._div_memo = None

    def rhs(self, x):
        return ((x + self.a) * x + self.b) * x + self.c

    def discriminant(self):
        a, b, c = self.a, self.b, self.c
        return (a * b * c * 18 - (a ** 3) * c * 4 + (a * a) * (b * b)
                - (b ** 3) * 4 - (c * c) * 27)

    def b_invariants(self) -> Tuple:
        return (self.a * 4, self.b * 2, self.c * 4, self.a * self.c * 4 - self.b * self.b)

    def infinity(self) -> "CurvePoint":
        return CurvePoint(None, None, True)

    def point(self, x, y) -> "CurvePoint":
        p = CurvePoint(x, y, False)
        if not self.contains(p):
            raise ValueError("point is not on the curve")
        return p

    def contains(self, p: "CurvePoint") -> bool:
        if p.is_infinity:
            return True
        return (p.y * p.y - self.rhs(p.x)) == (self.zero)

    def __repr__(self):
        return "WeierstrassCurve(a=%r, b=%r, c=%r)" % (self.a, self.b, self.c)


class CurvePoint:
    __slots__ = ("x", "y", "is_infinity")

    def __init__(self, x, y, is_infinity: bool = False):
        self.x = x
        self.y = y
        self.is_infinity = is_infinity

    def __repr__(self):
        if self.is_infinity:
            return "CurvePoint(infinity)"
        return "CurvePoint(%r, %r)" % (self.x, self.y)

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return self.x == other.x and self.y == other.y

    __hash__ = None


def point_neg(p: CurvePoint) -> CurvePoint:
    if p.is_infinity:
        return p
    return CurvePoint(p.x, -p.y, False)


def point_add(curve: WeierstrassCurve, p1: CurvePoint, p2: CurvePoint) -> CurvePoint:
    if p1.is_infinity:
        return p2
    if p2.is_infinity:
        return p1
    if p1.x == p2.x:
        if (p1.y + p2.y) == curve.zero:
            return curve.infinity()
        # doubling; y1 = y2 != 0 here
        num = (p1.x * p1.x * 3) + (curve.a * p1.x * 2) + curve.b
        slope = num * ((p1.y * 2) ** -1)
    else:
        slope = (p2.y - p1.y) * ((p2.x - p1.x) ** -1)
    x3 = slope * slope - curve.a - p1.x - p2.x
    y3 = slope * (p1.x - x3) - p1.y
    return CurvePoint(x3, y3, False)


def scalar_mult(curve: WeierstrassCurve, k: int, p: CurvePoint) -> CurvePoint:
    if k < 0:
        return scalar_mult(curve, -k, point_neg(p))
    acc = curve.infinity()
    addend = p
    while k:
        if k & 1:
            acc = point_add(curve, acc, addend)
        addend = point_add(curve, addend, addend)
        k >>= 1
    return acc


def division_polynomial(curve: WeierstrassCurve, m: int) -> Tuple[List, bool]:
    """(f_m as a polynomial in x, even flag); the full ψ_m is f_m · (2y)^[m even].

    Base cases f₃, f₄ come from the b-invariants; above that the poly pair
    recurrences run with (2y)² folded in as 4·rhs(x).
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    memo = curve._div_memo
    if memo is None:
        one, zero = curve.one, curve.zero
        a, b, c = curve.a, curve.b, curve.c
        b2, b4, b6, b8 = curve.b_invariants()
        f3 = [a * c * 4 - b * b, c * 12, b * 6, a * 4, one * 3]
        f4 = [b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, b8 * 10, b6 * 10, b4 * 5, b2, one * 2]
        memo = {0: [], 1: [one], 2: [one], 3: pl.trim(f3), 4: pl.trim(f4)}
        curve._div_memo = memo
    _div_poly_fill(curve, memo, m)
    return list(memo[m]), (m % 2 == 0)


def _div_poly_fill(curve: WeierstrassCurve, memo, m: int):
    if m in memo:
        return
    k = m // 2
    needs = (k - 2, k - 1, k, k + 1, k + 2)
    for n in needs:
        if n >= 0 and n not in memo:
            _div_poly_fill(curve, memo, n)
    w_poly = [curve.c, curve.b, curve.a, curve.one]
    w2_16 = pl.scale(pl.mul(w_poly, w_poly), curve.one * 16)
    cube = lambda p: pl.mul(pl.mul(p, p), p)
    sq = lambda p: pl.mul(p, p)
    if m % 2:
        lhs = pl.mul(memo[k + 2], cube(memo[k]))
        rhs = pl.mul(memo[k - 1], cube(memo[k + 1]))
        if k % 2 == 0:
            val = pl.sub(pl.mul(w2_16, lhs), rhs)
        else:
            val = pl.sub(lhs, pl.mul(w2_16, rhs))
    else:
        inner = pl.sub(pl.mul(memo[k + 2], sq(memo[k - 1])), pl.mul(memo[k - 2], sq(memo[k + 1])))
        val = pl.mul(memo[k], inner)
    memo[m] = pl.trim(val)


class DivisionValues:
    """Memoized f_m(x₀) for a fixed x₀, with w = rhs(x₀) supplied once."""

    __slots__ = ("x0", "w", "memo", "w2_16")

    def __init__(self, curve: WeierstrassCurve, x0, w=None):
        self.x0 = x0
        self.w = curve.rhs(x0) if w is None else w
        one = curve.one
        a, b, c = curve.a, curve.b, curve.c
        b2, b4, b6, b8 = curve.b_invariants()
        x = x0
        f3 = ((x * 3 + a * 4) * x + b * 6) * x * x + c * 12 * x + (a * c * 4 - b * b)
        f4 = (((((x * 2 + b2) * x + b4 * 5) * x + b6 * 10) * x + b8 * 10) * x
              + (b2 * b8 - b4 * b6)) * x + (b4 * b8 - b6 * b6)
        self.memo = {0: curve.zero, 1: one, 2: one, 3: f3, 4: f4}
        self.w2_16 = self.w * self.w * 16

    def __getitem__(self, m: int):
        memo = self.memo
        val = memo.get(m)
        if val is not None:
            return val
        k = m // 2
        if m % 2:
            lhs = self[k + 2] * self[k] ** 3
            rhs = self[k - 1] * self[k + 1] ** 3
            val = (self.w2_16 * lhs - rhs) if k % 2 == 0 else (lhs - self.w2_16 * rhs)
        else:
            val = self[k] * (self[k + 2] * self[k - 1] ** 2 - self[k - 2] * self[k + 1] ** 2)
        memo[m] = val
        return val


def _default_zero_test(v) -> bool:
    return not v


def tower_zero_test(v: TowerElement) -> bool:
    """Zero test that exposes zero divisors instead of conflating them with nonzero."""
    if v.is_zero():
        return True
    h = tower_component_gcd(v)
    if 0 < pl.degree(list(h)) < v.tower.relative_degree:
        raise ZeroDivisorSplit(h, "division value vanishes on a proper factor")
    return False


def section_torsion_order(curve: WeierstrassCurve, x0, w, T_max: int,
                          zero_test=None) -> Optional[int]:
    """Least m ≤ T_max with m·(x₀, y) = ∞ for y² = w, else None.

    The answer does not depend on the choice of square root: ψ_m(x, y)
    factors as f_m(x)·(2y)^[m even], so only w's vanishing matters.
    """
    zt = zero_test or _default_zero_test
    values = DivisionValues(curve, x0, w)
    if zt(w):
        return 2
    for m in range(2, T_max + 1):
        if zt(values[m]):
            return m
    return None


def torsion_order(curve: WeierstrassCurve, p: CurvePoint, T_max: int,
                  zero_test=None, cross_check: bool = False):
    """Least m ≤ T_max with m·P = ∞ decided by division polynomials, else None."""
    if T_max < 1:
        raise ValueError("T_max must be at least 1")
    if p.is_infinity:
        return 1
    order = section_torsion_order(curve, p.x, p.y * p.y, T_max, zero_test)
    if order is not None and cross_check:
        if not scalar_mult(curve, order, p).is_infinity:
            raise ArithmeticError("division polynomial order fails the group-law check")
        for q in factorize(order):
            if scalar_mult(curve, order // q, p).is_infinity:
                raise ArithmeticError("a proper divisor already kills the point")
    return order


class _NormZero(Exception):
    """w turned out to be a square: u/v is a square root of w."""

    def __init__(self, u, v):
        super().__init__("quadratic extension is split")
        self.u = u
        self.v = v


class QuadRing:
    """base[t]/(t² − w), the home of a section's y-coordinate."""

    __slots__ = ("w", "base_zero", "base_one")

    def __init__(self, w):
        self.w = w
        self.base_zero = w - w
        self.base_one = self.base_zero + 1

    def element(self, u, v) -> "QuadElement":
        return QuadElement(self, u, v)

    def from_base(self, u) -> "QuadElement":
        return QuadElement(self, self.base_zero + u, self.base_zero)

    def zero(self) -> "QuadElement":
        return self.from_base(0)

    def one(self) -> "QuadElement":
        return self.from_base(1)

    def gen(self) -> "QuadElement":
        return QuadElement(self, self.base_zero, self.base_one)


class QuadElement:
    __slots__ = ("ring", "u", "v")

    def __init__(self, ring: QuadRing, u, v):
        self.ring = ring
        self.u = u
        self.v = v

    def _lift(self, other) -> Optional["QuadElement"]:
        if isinstance(other, QuadElement):
            if other.ring is not self.ring:
                raise ValueError("mixed quadratic extensions")
            return other
        try:
            return self.ring.from_base(other)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadElement(self.ring, self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(self.ring, -self.u, -self.v)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadElement(self.ring, self.u - o.u, self.v - o.v)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        w = self.ring.w
        return QuadElement(self.ring,
                           self.u * o.u + w * (self.v * o.v),
                           self.u * o.v + self.v * o.u)

    __rmul__ = __mul__

    def inverse(self) -> "QuadElement":
        norm = self.u * self.u - self.ring.w * (self.v * self.v)
        if not norm:
            if (not self.u) and (not self.v):
                raise ZeroDivisionError("inverse of zero")
            raise _NormZero(self.u, self.v)
        norm_inv = norm ** -1
        return QuadElement(self.ring, self.u * norm_inv, -self.v * norm_inv)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __bool__(self):
        return bool(self.u) or bool(self.v)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return not (self - o)

    __hash__ = None

    def __repr__(self):
        return "QuadElement(%r + t*%r)" % (self.u, self.v)


def section_cross_check(curve: WeierstrassCurve, x0, w, m: int) -> bool:
    """Group-law confirmation that (x₀, √w) has exact order m.

    Runs in base[t]/(t²−w); if the arithmetic discovers that w is a square
    the check restarts with the explicit square root.
    """
    try:
        quad = QuadRing(w)
        lifted = WeierstrassCurve(quad.from_base(curve.a), quad.from_base(curve.b),
                                  quad.from_base(curve.c))
        p = CurvePoint(quad.from_base(x0), quad.gen(), False)
        return _order_check(lifted, p, m)
    except _NormZero as split:
        y = split.u * (split.v ** -1)
        base_curve = WeierstrassCurve(curve.a, curve.b, curve.c)
        p = CurvePoint(x0, y, False)
        return _order_check(base_curve, p, m)


def _order_check(curve, p, m: int) -> bool:
    if not scalar_mult(curve, m, p).is_infinity:
        return False
    for q in factorize(m):
        if scalar_mult(curve, m // q, p).is_infinity:
            return False
    return True


class BadReductionSet:
    """Affine bad λ-values as a squarefree polynomial, plus an infinity flag."""

    __slots__ = ("polynomial", "rational_points", "includes_infinity")

    def __init__(self, polynomial: List[Fraction], rational_points: List[Fraction],
                 includes_infinity: bool):
        self.polynomial = list(polynomial)
        self.rational_points = sorted(rational_points)
        self.includes_infinity = includes_infinity

    def contains(self, lam: Fraction) -> bool:
        return pl.evaluate(self.polynomial, Fraction(lam)) == 0

    def complex_points(self, prec: int = 128) -> List[mpmath.mpc]:
        if pl.degree(self.polynomial) < 1:
            return []
        with mpmath.workprec(2 * prec):
            roots = mpmath.polyroots([mpmath.mpf(c.numerator) / c.denominator
                                      for c in reversed(self.polynomial)], maxsteps=200,
                                     extraprec=prec)
            snap = mpmath.mpf(2) ** (-48)
            roots = sorted((mpmath.mpc(r) for r in roots),
                           key=lambda z: (mpmath.nint(mpmath.re(z) / snap),
                                          mpmath.nint(mpmath.im(z) / snap)))
        return roots

    def heights_log(self) -> List[float]:
        """log of the naive height of each rational bad point."""
        import math
        return [math.log(max(abs(p.numerator), p.denominator)) for p in self.rational_points]

    def to_json_dict(self) -> dict:
        from .serde import frac_to_str
        return {
            "polynomial": [frac_to_str(c) for c in self.polynomial],
            "rational_points": [frac_to_str(p) for p in self.rational_points],
            "includes_infinity": self.includes_infinity,
        }


class SpecializedSection:
    """Exact fiber data: the curve at λ₀ and the section's x and w = rhs(x)."""

    __slots__ = ("curve", "x0", "w", "lam0")

    def __init__(self, curve: WeierstrassCurve, x0, w, lam0):
        self.curve = curve
        self.x0 = x0
        self.w = w
        self.lam0 = lam0

    @property
    def has_rational_y(self) -> bool:
        return not self.w


class EllipticScheme:
    """y² = x³ + a(λ)x² + b(λ)x + c(λ) with a marked section abscissa."""

    __slots__ = ("a", "b", "c", "section_x", "section_y_square")

    def __init__(self, a: RationalFunction, b: RationalFunction, c: RationalFunction,
                 section_x: RationalFunction):
        self.a = a
        self.b = b
        self.c = c
        self.section_x = section_x
        sx = section_x
        self.section_y_square = sx ** 3 + a * sx ** 2 + b * sx + c
        if self.discriminant_function().is_zero():
            raise ValueError("family is identically singular")

    def discriminant_function(self) -> RationalFunction:
        a, b, c = self.a, self.b, self.c
        return (18 * a * b * c - 4 * a ** 3 * c + a ** 2 * b ** 2
                - 4 * b ** 3 - 27 * c ** 2)

    def bad_reduction_set(self) -> BadReductionSet:
        disc = self.discriminant_function()
        bad = list(disc.num)
        for f in (self.a, self.b, self.c, self.section_x):
            if pl.degree(list(f.den)) > 0:
                bad = pl.mul(bad, list(f.den))
        bad = pl.monic(pl.squarefree_part(bad)) if pl.degree(bad) > 0 else [Fraction(1)]
        rational = rational_roots(bad)
        includes_infinity = pl.degree(list(disc.num)) != pl.degree(list(disc.den))
        return BadReductionSet(bad, rational, includes_infinity)

    def specialize(self, lam0) -> SpecializedSection:
        one = lam0 ** 0
        try:
            a0 = self.a.evaluate(lam0, one)
            b0 = self.b.evaluate(lam0, one)
            c0 = self.c.evaluate(lam0, one)
            x0 = self.section_x.evaluate(lam0, one)
        except ZeroDivisionError as exc:
            raise BadReductionError("coefficient pole at the given λ") from exc
        curve = WeierstrassCurve(a0, b0, c0)
        disc = curve.discriminant()
        if not disc:
            raise BadReductionError("singular fiber at the given λ")
        if isinstance(disc, TowerElement):
            h = tower_component_gcd(disc)
            if 0 < pl.degree(list(h)) < disc.tower.relative_degree:
                raise ZeroDivisorSplit(h, "discriminant vanishes on a proper factor")
        w = curve.rhs(x0)
        return SpecializedSection(curve, x0, w, lam0)

    def to_json_dict(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "c": str(self.c),
                "section_x": str(self.section_x)}

    @classmethod
    def from_json_dict(cls, data: dict) -> "EllipticScheme":
        return cls(
            RationalFunction.parse(data["a"]),
            RationalFunction.parse(data["b"]),
            RationalFunction.parse(data["c"]),
            RationalFunction.parse(data["section_x"]),
        )


def legendre_scheme(section_x: str = "2") -> EllipticScheme:
    """y² = x(x−1)(x−λ) with a constant section abscissa (default 2)."""
    lam = RationalFunction.variable()
    return EllipticScheme(
        a=-(lam + 1),
        b=lam,
        c=RationalFunction.constant(0),
        section_x=RationalFunction.parse(section_x),
    )


def _reduced_ratfunc(f: RationalFunction, red: FiniteReduction):
    num = red.ring.element([red.reduce_fraction(c) for c in f.num])
    den = red.ring.element([red.reduce_fraction(c) for c in f.den])
    try:
        return num * den.inverse()
    except ZeroDivisionError as exc:
        raise BadReductionError("coefficient denominator not invertible mod q=%d" % red.q) from exc


def prescreen_survivors(scheme: EllipticScheme, red: FiniteReduction, T_max: int) -> Set[int]:
    """Orders m ≤ T_max not refuted mod red.q, uniformly over all fiber roots.

    A refutation is sound with no point arithmetic: if the exact section had
    order m on some root of g, the exact division value f_m(x₀) (or w for
    even m) would be zero there, hence share a factor with g mod q.
    """
    a0 = _reduced_ratfunc(scheme.a, red)
    b0 = _reduced_ratfunc(scheme.b, red)
    c0 = _reduced_ratfunc(scheme.c, red)
    x0 = _reduced_ratfunc(scheme.section_x, red)
    curve = WeierstrassCurve(a0, b0, c0)
    disc = curve.discriminant()
    g_img = list(red.g_image)
    if len(gp_gcd(list(disc.coeffs), g_img, red.q)) - 1 != 0:
        raise BadReductionError("bad reduction meets a fiber root mod q=%d" % red.q)
    values = DivisionValues(curve, x0)
    w = values.w
    w_invertible = len(gp_gcd(list(w.coeffs), g_img, red.q)) - 1 == 0 if w else False
    survivors = set()
    for m in range(2, T_max + 1):
        if m % 2 == 0 and not w_invertible:
            survivors.add(m)
            continue
        f_m = values[m]
        if not f_m:
            survivors.add(m)
            continue
        if len(gp_gcd(list(f_m.coeffs), g_img, red.q)) - 1 != 0:
            survivors.add(m)
    return survivors


def torsion_prescreen(scheme: EllipticScheme, reductions: Sequence[FiniteReduction],
                      m: int, T_max: Optional[int] = None) -> str:
    """'fail' proves no fiber root has a section of order m; 'pass' is inconclusive."""
    if m == 1:
        return "fail"  # affine sections are never the identity
    cap = T_max if T_max is not None else m
    for red in reductions:
        try:
            if m not in prescreen_survivors(scheme, red, max(cap, m)):
                return "fail"
        except BadReductionError:
            continue  # unusable prime, skipped
    return "pass"
