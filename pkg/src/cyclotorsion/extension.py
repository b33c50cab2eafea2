"""Relative extensions L = Q(zeta_N)[y]/(g) and their reductions mod q.

Towers are two-level by construction: a cyclotomic base and one monic
squarefree relative polynomial g.  Reducible g is tolerated; inversion of
a zero divisor raises ZeroDivisorSplit carrying the discovered factor, and
the caller splits the tower and retries per factor.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd
from typing import Iterable, List, Optional, Sequence, Tuple

import mpmath

from . import polynomials as pl
from .cyclotomic import CyclotomicField, CyclotomicNumber
from .errors import BadReductionError, PrecisionExhausted, ZeroDivisorSplit
from .exactlinalg import EchelonBasis, rational_kernel_basis
from .finitefield import (
    QuotientRing,
    element_of_order,
    gp_derivative,
    gp_gcd,
    irreducible_factors,
    is_probable_prime,
)


class FieldTower:
    __slots__ = ("base", "g", "removed_multiplicity", "_root_cache")

    def __init__(self, base: CyclotomicField, g: Sequence[CyclotomicNumber], removed_multiplicity: int = 0):
        self.base = base
        self.g = tuple(g)
        self.removed_multiplicity = removed_multiplicity
        self._root_cache = {}

    @property
    def relative_degree(self) -> int:
        return len(self.g) - 1

    @property
    def absolute_degree(self) -> int:
        return self.base.degree * self.relative_degree

    def __repr__(self) -> str:
        return "FieldTower(N=%d, deg=%d)" % (self.base.order, self.relative_degree)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldTower):
            return NotImplemented
        return self.base.order == other.base.order and self.g == other.g

    def __hash__(self):
        return hash((self.base.order, self.g))

    def _coerce_scalar(self, value) -> CyclotomicNumber:
        if isinstance(value, CyclotomicNumber):
            if value.field.order == self.base.order:
                return value
            if self.base.order % value.field.order == 0:
                return value.lift_to(self.base.order)
            raise ValueError("coefficient of order %d does not embed in Q(zeta_%d)"
                             % (value.field.order, self.base.order))
        if isinstance(value, (int, Fraction)):
            return self.base.from_rational(value)
        raise TypeError("cannot coerce %r into the tower base" % (value,))

    def element(self, coeffs: Iterable) -> "TowerElement":
        poly = [self._coerce_scalar(c) for c in coeffs]
        poly = pl.mod(poly, list(self.g))
        return self._wrap(poly)

    def _wrap(self, reduced: List[CyclotomicNumber]) -> "TowerElement":
        d = self.relative_degree
        padded = list(reduced) + [self.base.zero()] * (d - len(reduced))
        return TowerElement(self, tuple(padded))

    def zero(self) -> "TowerElement":
        return self._wrap([])

    def one(self) -> "TowerElement":
        return self.element([self.base.one()])

    def from_base(self, value) -> "TowerElement":
        return self.element([value])

    def gen(self) -> "TowerElement":
        return self.element([self.base.zero(), self.base.one()])

    def to_json_dict(self) -> dict:
        return {
            "N": self.base.order,
            "g": [c.to_json_dict()["coeffs"] for c in self.g],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "FieldTower":
        base = CyclotomicField.get(int(data["N"]))
        g = [CyclotomicNumber.from_json_dict({"N": base.order, "coeffs": row}) for row in data["g"]]
        return make_tower(base, g)

    def complex_roots(self, j: int = 1, prec: int = 128) -> List[mpmath.mpc]:
        """All roots of g under the j-th embedding of the base, (re, im) lexicographic."""
        key = (j, prec)
        cached = self._root_cache.get(key)
        if cached is not None:
            return list(cached)
        roots = _certified_roots(self.g, j, prec)
        self._root_cache[key] = tuple(roots)
        return roots


def make_tower(base: CyclotomicField, g: Sequence) -> FieldTower:
    coeffs = []
    for c in g:
        if isinstance(c, CyclotomicNumber):
            coeffs.append(c if c.field.order == base.order else c.lift_to(base.order))
        else:
            coeffs.append(base.from_rational(c))
    coeffs = pl.trim(coeffs)
    if pl.degree(coeffs) < 1:
        raise ValueError("defining polynomial must have degree at least 1")
    if not (coeffs[-1] == 1):
        raise ValueError("defining polynomial must be monic")
    square_free = pl.squarefree_part(coeffs)
    removed = pl.degree(coeffs) - pl.degree(square_free)
    return FieldTower(base, square_free, removed_multiplicity=removed)


class TowerElement:
    __slots__ = ("tower", "coeffs")

    def __init__(self, tower: FieldTower, coeffs: Tuple[CyclotomicNumber, ...]):
        self.tower = tower
        self.coeffs = coeffs

    def poly(self) -> List[CyclotomicNumber]:
        return pl.trim(list(self.coeffs))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_base(self) -> bool:
        return all(c.is_zero() for c in self.coeffs[1:])

    def base_value(self) -> CyclotomicNumber:
        if not self.is_base():
            raise ValueError("element is not in the base field")
        return self.coeffs[0] if self.coeffs else self.tower.base.zero()

    def is_rational(self) -> bool:
        return self.is_base() and self.base_value().is_rational()

    def rational_value(self) -> Fraction:
        return self.base_value().rational_value()

    def _pair(self, other) -> Optional[Tuple["TowerElement", "TowerElement"]]:
        if isinstance(other, TowerElement):
            if other.tower != self.tower:
                raise ValueError("elements of different towers")
            return self, other
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return self, self.tower.from_base(other)
        return None

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return self.tower._wrap(pl.add(a.poly(), b.poly()))

    __radd__ = __add__

    def __neg__(self):
        return self.tower._wrap(pl.neg(self.poly()))

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return self.tower._wrap(pl.sub(a.poly(), b.poly()))

    def __rsub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b - a

    def __mul__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return self.tower._wrap(pl.mod(pl.mul(a.poly(), b.poly()), list(self.tower.g)))

    __rmul__ = __mul__

    def inverse(self) -> "TowerElement":
        g0, s, _ = pl.xgcd(self.poly(), list(self.tower.g))
        d0 = pl.degree(g0)
        if d0 == pl.degree(list(self.tower.g)):
            raise ZeroDivisionError("inverse of zero in the tower")
        if d0 > 0:
            raise ZeroDivisorSplit(tuple(g0), "inversion found a factor of degree %d" % d0)
        # g0 is the constant 1 (xgcd returns a monic gcd)
        return self.tower._wrap(pl.mod(s, list(self.tower.g)))

    def __truediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b * a.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = self.tower.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return (a - b).is_zero()

    __hash__ = None  # mutable-looking cross-type equality; use .key()

    def key(self) -> Tuple:
        return (self.tower.base.order, self.tower.g, tuple(c.key() for c in self.coeffs))

    def __repr__(self) -> str:
        return "TowerElement(%r)" % (list(self.coeffs),)

    def rational_vector(self) -> List[Fraction]:
        """Coordinates in the Q-basis zeta^i y^j of the tower."""
        out: List[Fraction] = []
        for c in self.coeffs:
            out.extend(c.coeffs)
        return out

    def embedding(self, j: int = 1, root_index: int = 0, prec: int = 128) -> mpmath.mpc:
        roots = self.tower.complex_roots(j, prec)
        r = roots[root_index]
        with mpmath.workprec(prec + 16):
            acc = mpmath.mpc(0)
            for c in reversed(self.coeffs):
                acc = acc * r + c.embedding(j, prec=prec + 16)
        return +acc

    def all_embeddings(self, prec: int = 128) -> List[mpmath.mpc]:
        out = []
        N = self.tower.base.order
        for j in range(1, N + 1):
            if _int_gcd(j, N) != 1:
                continue
            for idx in range(self.tower.relative_degree):
                out.append(self.embedding(j, idx, prec))
        return out

    def minimal_polynomial(self) -> List[Fraction]:
        """Monic minimal polynomial over Q, constant term first."""
        basis = EchelonBasis()
        powers = [self.tower.one()]
        while basis.add(powers[-1].rational_vector()):
            powers.append(powers[-1] * self)
        rows = [p.rational_vector() for p in powers]
        # dependency coefficients live in the right kernel of the transpose
        mat = [[rows[i][j] for i in range(len(rows))] for j in range(len(rows[0]))]
        kernel = rational_kernel_basis(mat)
        if len(kernel) != 1:
            raise ArithmeticError("power relation matrix has unexpected kernel rank %d" % len(kernel))
        vec = kernel[0]
        lead = vec[-1]
        return [Fraction(c, lead) for c in vec]

    def absolute_degree(self) -> int:
        return len(self.minimal_polynomial()) - 1


def tower_component_gcd(elem: TowerElement) -> Tuple[CyclotomicNumber, ...]:
    """gcd of the element's residue polynomial with g; proper factors expose zero divisors."""
    return tuple(pl.gcd(elem.poly(), list(elem.tower.g)))


def split_tower(tower: FieldTower, factor: Sequence[CyclotomicNumber]) -> Tuple[FieldTower, FieldTower]:
    f = pl.trim(list(factor))
    quotient, rem = pl.divmod_poly(list(tower.g), f)
    if pl.trim(rem):
        raise ValueError("factor does not divide the tower polynomial")
    if pl.degree(f) < 1 or pl.degree(quotient) < 1:
        raise ValueError("trivial split")
    return (FieldTower(tower.base, pl.monic(f)), FieldTower(tower.base, pl.monic(quotient)))


def project_element(elem: TowerElement, target: FieldTower) -> TowerElement:
    """Reinterpret an element in a split-off quotient of its tower."""
    if target.base.order != elem.tower.base.order:
        raise ValueError("projection must preserve the base field")
    return target._wrap(pl.mod(elem.poly(), list(target.g)))


def _certified_roots(g: Sequence[CyclotomicNumber], j: int, prec: int) -> List[mpmath.mpc]:
    degree = len(g) - 1
    if degree < 1:
        return []
    for attempt in range(4):
        work = 2 * prec + 64 * (attempt + 1)
        with mpmath.workprec(work):
            coeffs = [c.embedding(j, prec=work) for c in g]
            # mpmath.polyroots wants leading coefficient first
            try:
                roots = mpmath.polyroots(list(reversed(coeffs)), maxsteps=200, extraprec=work)
            except mpmath.libmp.NoConvergence:
                continue
            deriv = [k * coeffs[k] for k in range(1, len(coeffs))]
            ok = True
            polished = []
            for r in roots:
                for _ in range(3):
                    fv = _horner(coeffs, r)
                    dv = _horner(deriv, r)
                    if dv == 0:
                        ok = False
                        break
                    r = r - fv / dv
                if not ok:
                    break
                fv = _horner(coeffs, r)
                dv = _horner(deriv, r)
                if dv == 0 or abs(fv / dv) > mpmath.mpf(2) ** (-prec):
                    ok = False
                    break
                polished.append(+r)
            if ok and len(polished) == degree:
                snap = mpmath.mpf(2) ** (-48)
                polished.sort(key=lambda z: (mpmath.nint(mpmath.re(z) / snap), mpmath.nint(mpmath.im(z) / snap)))
                return [mpmath.mpc(z) for z in polished]
    raise PrecisionExhausted("root isolation failed at %d bits for degree %d" % (prec, degree))


def _horner(coeffs, x):
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


class FiniteReduction:
    """Image of a tower mod a prime q ≡ 1 (mod N): base collapses to GF(q)."""

    __slots__ = ("q", "N", "zeta_image", "g_image", "ring", "factor", "ext_degree", "root_ring")

    def __init__(self, q, N, zeta_image, g_image, ring, factor, root_ring):
        self.q = q
        self.N = N
        self.zeta_image = zeta_image
        self.g_image = tuple(g_image)
        self.ring = ring
        self.factor = tuple(factor)
        self.ext_degree = len(factor) - 1
        self.root_ring = root_ring

    @property
    def chosen_root(self):
        return self.root_ring.gen()

    def reduce_scalar(self, c: CyclotomicNumber) -> int:
        acc = 0
        for frac in reversed(c.coeffs):
            if frac.denominator % self.q == 0:
                raise BadReductionError("denominator divisible by q=%d" % self.q)
            val = frac.numerator * pow(frac.denominator, -1, self.q) % self.q
            acc = (acc * self.zeta_image + val) % self.q
        return acc

    def reduce_fraction(self, frac: Fraction) -> int:
        if frac.denominator % self.q == 0:
            raise BadReductionError("denominator divisible by q=%d" % self.q)
        return frac.numerator * pow(frac.denominator, -1, self.q) % self.q


def reduce_mod_prime(tower: FieldTower, q: int, seed=None) -> FiniteReduction:
    N = tower.base.order
    if not is_probable_prime(q):
        raise BadReductionError("q=%d is not prime" % q)
    if q <= 3 or (q - 1) % N != 0:
        raise BadReductionError("q=%d is not 1 mod %d" % (q, N))
    zeta_image = element_of_order(q, N) if N > 1 else 1
    if N > 1 and pow(zeta_image, N, q) != 1:
        raise BadReductionError("claimed root of unity fails verification")

    g_image = []
    for c in tower.g:
        acc = 0
        for frac in reversed(c.coeffs):
            if frac.denominator % q == 0:
                raise BadReductionError("denominator divisible by q=%d" % q)
            val = frac.numerator * pow(frac.denominator, -1, q) % q
            acc = (acc * zeta_image + val) % q
        g_image.append(acc)
    while g_image and g_image[-1] == 0:
        g_image.pop()
    if len(g_image) - 1 != tower.relative_degree:
        raise BadReductionError("leading coefficient vanished mod q=%d" % q)

    if len(g_image) > 2:
        deriv = gp_derivative(list(g_image), q)
        if len(gp_gcd(list(g_image), deriv, q)) - 1 != 0:
            raise BadReductionError("g not squarefree mod q=%d" % q)

    factors = irreducible_factors(list(g_image), q, seed=seed if seed is not None else q * 1000003 + N)
    factor = factors[0]
    return FiniteReduction(
        q=q, N=N, zeta_image=zeta_image, g_image=g_image,
        ring=QuotientRing(q, g_image), factor=factor,
        root_ring=QuotientRing(q, factor),
    )
