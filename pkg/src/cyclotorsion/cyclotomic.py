"""Exact arithmetic in cyclotomic fields and root-of-unity tuples.

Elements of Q(zeta_N) are coefficient vectors over Q of length phi(N),
reduced modulo the N-th cyclotomic polynomial.  zeta_N denotes the fixed
primitive root exp(2*pi*i/N); the complex embedding indexed by j coprime to N
sends zeta_N to exp(2*pi*i*j/N), and j=1 is the reference embedding used
everywhere a single numeric value is needed.

Also here: the tuple type for vectors of roots of unity (common order, one
exponent per coordinate), exact vanishing-subsum detection, and the torsion
classifier for the trace-parametrized family [[0,1],[-1,lam]] in SL_2.
"""

from __future__ import annotations

import cmath
import functools
import math
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import mpmath

from . import polynomials as pl
from .errors import BudgetExceeded
from .serde import frac_from_str, frac_to_str

SUBSUM_CAP = 20  # exhaustive subset enumeration is 2**n; hard stop above this


def factorize(n: int) -> Dict[int, int]:
    if n <= 0:
        raise ValueError("factorize expects a positive integer")
    out: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@functools.lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    if n <= 0:
        raise ValueError("euler_phi expects a positive integer")
    result = n
    for p in factorize(n):
        result -= result // p
    return result


def phi_lower_bound_ok(n: int) -> bool:
    """Exact check of phi(n) >= sqrt(n/2), i.e. 2*phi(n)^2 >= n."""
    return 2 * euler_phi(n) ** 2 >= n


@functools.lru_cache(maxsize=None)
def moebius(n: int) -> int:
    if n <= 0:
        raise ValueError("moebius expects a positive integer")
    mu = 1
    for _, e in factorize(n).items():
        if e > 1:
            return 0
        mu = -mu
    return mu


def divisors(n: int) -> List[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> Tuple[int, ...]:
    """Integer coefficients of Phi_n, constant term first.

    Computed by exact division of x^n - 1 by the product of Phi_d over the
    proper divisors d of n.
    """
    if n <= 0:
        raise ValueError("cyclotomic_polynomial expects a positive integer")
    if n == 1:
        return (-1, 1)
    num: List[Fraction] = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in divisors(n)[:-1]:
        phid = [Fraction(c) for c in cyclotomic_polynomial(d)]
        num, rem = pl.divmod_poly(num, phid)
        if rem:
            raise ArithmeticError("cyclotomic division left a remainder")
    assert all(c.denominator == 1 for c in num)
    return tuple(int(c) for c in num)


class CyclotomicField:
    """The field Q(zeta_N); use CyclotomicField.get to share instances."""

    _instances: Dict[int, "CyclotomicField"] = {}

    def __init__(self, order: int):
        if order <= 0:
            raise ValueError("field order must be positive")
        self.order = order
        self.poly = cyclotomic_polynomial(order)
        self.degree = len(self.poly) - 1
        self._monomials: Dict[int, Tuple[int, ...]] = {}

    @classmethod
    def get(cls, order: int) -> "CyclotomicField":
        field = cls._instances.get(order)
        if field is None:
            field = cls(order)
            cls._instances[order] = field
        return field

    def __repr__(self) -> str:
        return f"CyclotomicField({self.order})"

    def reduce(self, coeffs: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        cs = list(coeffs)
        d = self.degree
        if len(cs) < d:
            cs += [Fraction(0)] * (d - len(cs))
        for i in range(len(cs) - 1, d - 1, -1):
            c = cs[i]
            if c:
                for j in range(d):
                    cs[i - d + j] -= c * self.poly[j]
            cs.pop()
        return tuple(cs)

    def monomial_vector(self, k: int) -> Tuple[int, ...]:
        """x^k mod Phi_N as an integer vector; exponents are taken mod N."""
        k %= self.order
        cached = self._monomials.get(k)
        if cached is None:
            if k < self.degree:
                cached = tuple(1 if i == k else 0 for i in range(self.degree))
            else:
                vec = self.reduce([Fraction(0)] * k + [Fraction(1)])
                cached = tuple(int(c) for c in vec)
            self._monomials[k] = cached
        return cached

    def element(self, coeffs: Iterable) -> "CyclotomicNumber":
        return CyclotomicNumber(self, self.reduce([Fraction(c) for c in coeffs]))

    def zero(self) -> "CyclotomicNumber":
        return self.element([])

    def one(self) -> "CyclotomicNumber":
        return self.element([1])

    def from_rational(self, q) -> "CyclotomicNumber":
        return self.element([Fraction(q)])

    def zeta(self, k: int = 1) -> "CyclotomicNumber":
        vec = self.monomial_vector(k)
        return CyclotomicNumber(self, tuple(Fraction(c) for c in vec))

    def embedding_guard_bits(self) -> int:
        return 16 + max(self.degree, 1).bit_length()


class CyclotomicNumber:
    """Immutable element of Q(zeta_N).

    Mixed-field binary operations lift both operands into Q(zeta_lcm) first,
    so sums of roots of unity with different orders are painless; the lift is
    the identity when the orders already agree.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: CyclotomicField, coeffs: Tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs

    # -- construction and structure -------------------------------------

    @classmethod
    def rational(cls, q) -> "CyclotomicNumber":
        return CyclotomicField.get(1).from_rational(q)

    def lift_to(self, order: int) -> "CyclotomicNumber":
        n = self.field.order
        if order == n:
            return self
        if order % n != 0:
            raise ValueError(f"cannot lift from order {n} to {order}")
        target = CyclotomicField.get(order)
        step = order // n
        raw = [Fraction(0)] * ((len(self.coeffs) - 1) * step + 1 or 1)
        for i, c in enumerate(self.coeffs):
            if c:
                raw[i * step] += c
        return CyclotomicNumber(target, target.reduce(raw))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def _coerce(value) -> "CyclotomicNumber":
        if isinstance(value, CyclotomicNumber):
            return value
        if isinstance(value, (int, Fraction)):
            return CyclotomicNumber.rational(value)
        raise TypeError(f"cannot coerce {type(value).__name__} into a cyclotomic number")

    def _pair(self, other) -> Tuple["CyclotomicNumber", "CyclotomicNumber"]:
        other = self._coerce(other)
        if self.field.order == other.field.order:
            return self, other
        m = math.lcm(self.field.order, other.field.order)
        return self.lift_to(m), other.lift_to(m)

    def __add__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return CyclotomicNumber(a.field, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.field, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return CyclotomicNumber(a.field, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        prod = pl.mul(list(a.coeffs), list(b.coeffs))
        return CyclotomicNumber(a.field, a.field.reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        modulus = [Fraction(c) for c in self.field.poly]
        g, s, _ = pl.xgcd(list(self.coeffs), modulus)
        if pl.degree(g) != 0:
            raise ArithmeticError("cyclotomic modulus is not squarefree")
        inv_g = g[0] ** -1
        return CyclotomicNumber(self.field, self.field.reduce(pl.scale(s, inv_g)))

    def __truediv__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self
        if exponent < 0:
            base = self.inverse()
            exponent = -exponent
        result = base.field.one()
        acc = base
        while exponent:
            if exponent & 1:
                result = result * acc
            exponent >>= 1
            if exponent:
                acc = acc * acc
        return result

    def __eq__(self, other) -> bool:
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return a.coeffs == b.coeffs

    __hash__ = None  # mixed-field equality makes a consistent hash impractical

    def __repr__(self) -> str:
        return f"CyclotomicNumber(N={self.field.order}, {[str(c) for c in self.coeffs]})"

    # -- Galois action and degrees --------------------------------------

    def conjugate(self, j: int) -> "CyclotomicNumber":
        """Image under zeta_N -> zeta_N^j; j must be coprime to N."""
        n = self.field.order
        if math.gcd(j, n) != 1:
            raise ValueError(f"conjugation index {j} is not coprime to {n}")
        raw = [Fraction(0)] * n if n > 1 else [Fraction(0)]
        for i, c in enumerate(self.coeffs):
            if c:
                raw[(i * j) % n] += c
        return CyclotomicNumber(self.field, self.field.reduce(raw))

    def galois_orbit(self) -> List["CyclotomicNumber"]:
        n = self.field.order
        seen = set()
        orbit = []
        for j in range(1, n + 1):
            if math.gcd(j, n) != 1:
                continue
            img = self.conjugate(j)
            if img.coeffs not in seen:
                seen.add(img.coeffs)
                orbit.append(img)
        return orbit

    def degree_over_Q(self) -> int:
        """[Q(z):Q], exactly, as the size of the Galois orbit."""
        return len(self.galois_orbit())

    # -- numerics --------------------------------------------------------

    def embedding(self, j: int = 1, prec: int = 53) -> mpmath.mpc:
        """Value under zeta_N -> exp(2*pi*i*j/N) at `prec` working bits.

        Evaluation runs with a guard of embedding_guard_bits() extra bits; for
        the coefficient sizes this package produces the first `prec` bits of
        the result are trustworthy.
        """
        n = self.field.order
        if math.gcd(j, n) != 1:
            raise ValueError(f"embedding index {j} is not coprime to {n}")
        with mpmath.workprec(prec + self.field.embedding_guard_bits()):
            zeta = mpmath.expjpi(mpmath.mpf(2 * (j % n)) / n)
            acc = mpmath.mpc(0)
            for c in reversed(self.coeffs):
                acc = acc * zeta + mpmath.mpf(c.numerator) / c.denominator
            return mpmath.mpc(acc)

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"N": self.field.order, "coeffs": [frac_to_str(c) for c in self.coeffs]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "CyclotomicNumber":
        field = CyclotomicField.get(int(data["N"]))
        coeffs = [frac_from_str(s) for s in data["coeffs"]]
        if len(coeffs) != field.degree:
            raise ValueError("coefficient vector length does not match phi(N)")
        return field.element(coeffs)

    def key(self) -> Tuple:
        """Hashable identity within a fixed field order."""
        return (self.field.order, self.coeffs)


class RootOfUnityTuple:
    """A tuple (zeta_N^{k_1}, ..., zeta_N^{k_n}) stored at its exact order.

    Construction normalizes: exponents are reduced mod N, and the common
    order is lowered to N/gcd(N, k_1, ..., k_n), which equals the order of
    the tuple as an element of the torus.
    """

    __slots__ = ("order", "exponents")

    def __init__(self, order: int, exponents: Sequence[int]):
        if order <= 0:
            raise ValueError("order must be positive")
        exps = [k % order for k in exponents]
        if not exps:
            raise ValueError("empty tuples are rejected; n must be at least 1")
        g = order
        for k in exps:
            g = math.gcd(g, k)
        self.order = order // g
        self.exponents = tuple(k // g for k in exps)

    @property
    def n(self) -> int:
        return len(self.exponents)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RootOfUnityTuple):
            return NotImplemented
        return self.order == other.order and self.exponents == other.exponents

    def __hash__(self) -> int:
        return hash((self.order, self.exponents))

    def __repr__(self) -> str:
        return f"RootOfUnityTuple(order={self.order}, exponents={self.exponents})"

    def multiset_key(self) -> Tuple:
        return (self.order, tuple(sorted(self.exponents)))

    def values(self) -> List[CyclotomicNumber]:
        field = CyclotomicField.get(self.order)
        return [field.zeta(k) for k in self.exponents]

    def sum(self) -> CyclotomicNumber:
        field = CyclotomicField.get(self.order)
        raw = [Fraction(0)] * field.degree
        for k in self.exponents:
            vec = field.monomial_vector(k)
            for i, c in enumerate(vec):
                if c:
                    raw[i] += c
        return CyclotomicNumber(field, tuple(raw))

    def embeddings(self, j: int = 1, prec: int = 53) -> List[mpmath.mpc]:
        if math.gcd(j, self.order) != 1:
            raise ValueError(f"embedding index {j} is not coprime to {self.order}")
        with mpmath.workprec(prec + 8):
            return [
                mpmath.expjpi(mpmath.mpf(2 * ((k * j) % self.order)) / self.order)
                for k in self.exponents
            ]

    def conjugate(self, j: int) -> "RootOfUnityTuple":
        if math.gcd(j, self.order) != 1:
            raise ValueError(f"conjugation index {j} is not coprime to {self.order}")
        return RootOfUnityTuple(self.order, [(k * j) % self.order for k in self.exponents])

    def to_json_dict(self) -> dict:
        return {"n": self.n, "N": self.order, "exponents": list(self.exponents)}

    @classmethod
    def from_json_dict(cls, data: dict) -> "RootOfUnityTuple":
        t = cls(int(data["N"]), [int(k) for k in data["exponents"]])
        if "n" in data and int(data["n"]) != t.n:
            raise ValueError("tuple length field disagrees with exponent list")
        return t


def tuple_order(t: RootOfUnityTuple) -> int:
    """Order of the tuple in the torus; normalization makes this t.order."""
    return t.order


def sum_of_roots(t: RootOfUnityTuple) -> CyclotomicNumber:
    return t.sum()


def find_vanishing_subset(t: RootOfUnityTuple) -> Optional[Tuple[int, ...]]:
    """Indices of a nonempty subset with exact sum zero, or None.

    Strategy: one pass of double-precision subset sums as a screen (unit
    vectors, so the accumulated error stays far below the 1e-6 gate), then
    exact integer vector sums for the few candidates the screen lets through.
    """
    n = t.n
    if n > SUBSUM_CAP:
        raise BudgetExceeded(f"subset enumeration capped at n <= {SUBSUM_CAP}, got {n}")
    order = t.order
    approx = [cmath.exp(2j * cmath.pi * k / order) for k in t.exponents]
    field = CyclotomicField.get(order)
    monos = [field.monomial_vector(k) for k in t.exponents]
    d = field.degree

    sums = [0j] * (1 << n)
    lowbit_index = [0] * (1 << n)
    for i in range(n):
        lowbit_index[1 << i] = i
    for mask in range(1, 1 << n):
        low = mask & (-mask)
        sums[mask] = sums[mask ^ low] + approx[lowbit_index[low]]
        if abs(sums[mask]) < 1e-6:
            acc = [0] * d
            m = mask
            while m:
                lb = m & (-m)
                vec = monos[lowbit_index[lb]]
                for i in range(d):
                    acc[i] += vec[i]
                m ^= lb
            if not any(acc):
                return tuple(i for i in range(n) if mask >> i & 1)
    return None


def has_vanishing_subsum(t: RootOfUnityTuple) -> bool:
    return find_vanishing_subset(t) is not None


# -- SL_2 torsion classifier ---------------------------------------------


def _as_cyclotomic(lam) -> CyclotomicNumber:
    if isinstance(lam, CyclotomicNumber):
        return lam
    return CyclotomicNumber.rational(Fraction(lam))


def sl2_matrix(lam) -> Tuple[Tuple[CyclotomicNumber, ...], ...]:
    lam = _as_cyclotomic(lam)
    field = lam.field
    return (
        (field.zero(), field.one()),
        (-field.one(), lam),
    )


def sl2_matrix_power(lam, k: int) -> Tuple[Tuple[CyclotomicNumber, ...], ...]:
    """Exact k-th power of [[0,1],[-1,lam]]; k >= 0."""
    if k < 0:
        raise ValueError("negative powers are not needed here")
    lam = _as_cyclotomic(lam)
    field = lam.field
    result = ((field.one(), field.zero()), (field.zero(), field.one()))
    acc = sl2_matrix(lam)
    while k:
        if k & 1:
            result = _mat2_mul(result, acc)
        k >>= 1
        if k:
            acc = _mat2_mul(acc, acc)
    return result


def _mat2_mul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def sl2_is_identity(mat) -> bool:
    return (
        mat[0][0] == 1 and mat[1][1] == 1 and mat[0][1].is_zero() and mat[1][0].is_zero()
    )


def sl2_torsion_order(lam) -> Optional[int]:
    """Order of [[0,1],[-1,lam]] in SL_2, or None when the order is infinite.

    The matrix has finite order exactly when lam = zeta + zeta^{-1} for a
    root of unity zeta with zeta^2 != 1, and the order is then the order of
    zeta.  Since Q(zeta_m + zeta_m^{-1}) has degree phi(m)/2 for m > 2, it
    suffices to scan the m with phi(m) <= 2*[Q(lam):Q]; the eigenvalues of
    the matrix pin zeta up to inversion, so the first match is the order.
    """
    lam = _as_cyclotomic(lam)
    d = lam.degree_over_Q()
    cap = 8 * d * d + 2
    for m in range(3, cap + 1):
        if euler_phi(m) > 2 * d:
            continue
        field = CyclotomicField.get(m)
        for k in range(1, m // 2 + 1):
            if math.gcd(k, m) != 1:
                continue
            if lam == field.zeta(k) + field.zeta(m - k):
                return m
    return None
