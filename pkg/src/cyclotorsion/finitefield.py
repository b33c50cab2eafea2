"""Prime fields, polynomial factorization mod q, and quotient-ring arithmetic.

Polynomials over GF(q) are lists of ints in [0, q), constant term first,
trimmed.  Everything here is elementary and self-contained; factorization
is distinct-degree followed by Cantor-Zassenhaus splitting with a seeded
generator so runs are reproducible.
"""

from __future__ import annotations

import random
from typing import Iterable

from .cyclotomic import factorize

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    # deterministic Miller-Rabin for n < 3.3e24 with this witness set
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_congruent_one(modulus: int, min_value: int, count: int) -> list:
    """The first `count` primes q with q ≡ 1 (mod modulus) and q > min_value."""
    found = []
    q = max(min_value + 1, 3)
    q += (1 - q) % modulus
    while len(found) < count:
        if q > 2 and is_probable_prime(q):
            found.append(q)
        q += modulus if modulus > 1 else 1
    return found


def element_of_order(q: int, n: int) -> int:
    """Smallest-witness element of exact multiplicative order n in GF(q)*."""
    if (q - 1) % n != 0:
        raise ValueError("no element of order %d in GF(%d)*" % (n, q))
    if n == 1:
        return 1
    prime_divisors = list(factorize(n))
    for a in range(2, q):
        z = pow(a, (q - 1) // n, q)
        if z == 1:
            continue
        if all(pow(z, n // p, q) != 1 for p in prime_divisors):
            return z
    raise ValueError("no generator found mod %d" % q)


class GFElement:
    """Element of a prime field, usable as a curve coefficient ring element."""

    __slots__ = ("q", "v")

    def __init__(self, q: int, v: int):
        self.q = q
        self.v = v % q

    def _lift(self, other):
        if isinstance(other, GFElement):
            if other.q != self.q:
                raise ValueError("mixed prime fields")
            return other
        if isinstance(other, int):
            return GFElement(self.q, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GFElement(self.q, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return GFElement(self.q, -self.v)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GFElement(self.q, self.v - o.v)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GFElement(self.q, o.v - self.v)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GFElement(self.q, self.v * o.v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o ** -1

    def __pow__(self, e: int):
        return GFElement(self.q, pow(self.v, e, self.q))

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.v == o.v

    def __hash__(self):
        return hash((self.q, self.v))

    def __repr__(self):
        return "GF(%d)(%d)" % (self.q, self.v)


def gp_trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def gp_add(a: list, b: list, q: int) -> list:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % q
    return gp_trim(out)


def gp_sub(a: list, b: list, q: int) -> list:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % q
    return gp_trim(out)


def gp_mul(a: list, b: list, q: int) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % q
    return gp_trim(out)


def gp_scale(a: list, c: int, q: int) -> list:
    c %= q
    return gp_trim([x * c % q for x in a])


def gp_divmod(a: list, b: list, q: int) -> tuple:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv_lead = pow(b[-1], -1, q)
    db, quo = len(b) - 1, [0] * max(0, len(a) - len(b) + 1)
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        factor = a[-1] * inv_lead % q
        quo[shift] = factor
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * c) % q
        gp_trim(a)
    return gp_trim(quo), a


def gp_mod(a: list, b: list, q: int) -> list:
    return gp_divmod(a, b, q)[1]


def gp_monic(a: list, q: int) -> list:
    if not a:
        return []
    return gp_scale(a, pow(a[-1], -1, q), q)


def gp_gcd(a: list, b: list, q: int) -> list:
    a, b = list(a), list(b)
    while b:
        a, b = b, gp_mod(a, b, q)
    return gp_monic(a, q)


def gp_xgcd(a: list, b: list, q: int) -> tuple:
    """(g, s, t) with s*a + t*b = g, g monic (or empty when a = b = 0)."""
    r0, r1 = list(a), list(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        quo, rem = gp_divmod(r0, r1, q)
        r0, r1 = r1, rem
        s0, s1 = s1, gp_sub(s0, gp_mul(quo, s1, q), q)
        t0, t1 = t1, gp_sub(t0, gp_mul(quo, t1, q), q)
    if not r0:
        return [], [], []
    c = pow(r0[-1], -1, q)
    return gp_scale(r0, c, q), gp_scale(s0, c, q), gp_scale(t0, c, q)


def gp_derivative(a: list, q: int) -> list:
    return gp_trim([i * c % q for i, c in enumerate(a)][1:])


def gp_eval(a: list, x: int, q: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % q
    return acc


def gp_pow_mod(base: list, e: int, mod: list, q: int) -> list:
    result, b = [1], gp_mod(base, mod, q)
    while e:
        if e & 1:
            result = gp_mod(gp_mul(result, b, q), mod, q)
        b = gp_mod(gp_mul(b, b, q), mod, q)
        e >>= 1
    return result


def distinct_degree_factorization(f: list, q: int) -> list:
    """[(d, product of the irreducible degree-d factors)] for monic squarefree f."""
    out, rest = [], gp_monic(list(f), q)
    h, d = [0, 1], 0
    while len(rest) - 1 > 0:
        d += 1
        if 2 * d > len(rest) - 1:
            out.append((len(rest) - 1, rest))
            break
        h = gp_pow_mod(h, q, rest, q)
        g = gp_gcd(gp_sub(h, [0, 1], q), rest, q)
        if len(g) - 1 > 0:
            out.append((d, g))
            rest, _ = gp_divmod(rest, g, q)
            h = gp_mod(h, rest, q)
    return out


def equal_degree_factorization(f: list, d: int, q: int, rng: random.Random) -> list:
    """Split a product of distinct monic irreducibles, all of degree d."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = [rng.randrange(q) for _ in range(n)]
        gp_trim(a)
        if len(a) - 1 < 1:
            continue
        g = gp_gcd(a, f, q)
        if 0 < len(g) - 1 < n:
            split = g
        else:
            b = gp_pow_mod(a, (q ** d - 1) // 2, f, q)
            g = gp_gcd(gp_sub(b, [1], q), f, q)
            if not 0 < len(g) - 1 < n:
                continue
            split = g
        other, _ = gp_divmod(f, split, q)
        return (equal_degree_factorization(split, d, q, rng)
                + equal_degree_factorization(other, d, q, rng))


def irreducible_factors(f: list, q: int, seed=None) -> list:
    """Monic irreducible factors of a monic squarefree f, sorted by (degree, coeffs)."""
    if q == 2:
        raise ValueError("q = 2 is out of scope")
    rng = random.Random(seed if seed is not None else (q, tuple(f)).__hash__())
    factors = []
    for d, block in distinct_degree_factorization(f, q):
        factors.extend(equal_degree_factorization(block, d, q, rng))
    factors.sort(key=lambda p: (len(p), tuple(p)))
    return factors


class QuotientRing:
    """GF(q)[y] / (modulus); elements are QuotElement."""

    __slots__ = ("q", "modulus")

    def __init__(self, q: int, modulus: Iterable):
        self.q = q
        self.modulus = tuple(gp_monic(list(modulus), q))
        if len(self.modulus) - 1 < 1:
            raise ValueError("modulus must have positive degree")

    def element(self, coeffs) -> "QuotElement":
        return QuotElement(self, gp_mod([c % self.q for c in coeffs], list(self.modulus), self.q))

    def zero(self) -> "QuotElement":
        return QuotElement(self, [])

    def one(self) -> "QuotElement":
        return QuotElement(self, [1])

    def gen(self) -> "QuotElement":
        return self.element([0, 1])

    def __eq__(self, other):
        return (isinstance(other, QuotientRing)
                and self.q == other.q and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.q, self.modulus))


class QuotElement:
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: QuotientRing, coeffs: list):
        self.ring = ring
        self.coeffs = tuple(coeffs)

    def _lift(self, other):
        if isinstance(other, QuotElement):
            if other.ring != self.ring:
                raise ValueError("mixed quotient rings")
            return other
        if isinstance(other, int):
            return self.ring.element([other])
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuotElement(self.ring, gp_add(list(self.coeffs), list(o.coeffs), self.ring.q))

    __radd__ = __add__

    def __neg__(self):
        return QuotElement(self.ring, gp_scale(list(self.coeffs), -1, self.ring.q))

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuotElement(self.ring, gp_sub(list(self.coeffs), list(o.coeffs), self.ring.q))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        prod = gp_mul(list(self.coeffs), list(o.coeffs), self.ring.q)
        return QuotElement(self.ring, gp_mod(prod, list(self.ring.modulus), self.ring.q))

    __rmul__ = __mul__

    def inverse(self) -> "QuotElement":
        g, s, _ = gp_xgcd(list(self.coeffs), list(self.ring.modulus), self.ring.q)
        if len(g) - 1 != 0:
            raise ZeroDivisionError("element shares a factor with the modulus")
        return QuotElement(self.ring, gp_mod(s, list(self.ring.modulus), self.ring.q))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.ring.one(), self
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
        return bool(self.coeffs)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __repr__(self):
        return "Quot(%r mod %r, q=%d)" % (list(self.coeffs), list(self.ring.modulus), self.ring.q)
