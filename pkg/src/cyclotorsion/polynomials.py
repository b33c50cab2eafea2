"""Dense univariate polynomial helpers over duck-typed coefficients.

Polynomials are plain lists of coefficients, constant term first, with no
trailing zeros (the zero polynomial is the empty list).  Coefficients must
support ``+``, ``-``, ``*``, ``== 0`` via ``__bool__``, and, where division is
used, ``** -1``.  ``fractions.Fraction``, the cyclotomic numbers, and the
tower elements of this package all qualify.
"""

from __future__ import annotations

from typing import Any, List, Sequence

Poly = List[Any]


def trim(cs: Sequence[Any]) -> Poly:
    cs = list(cs)
    while cs and not cs[-1]:
        cs.pop()
    return cs


def degree(cs: Sequence[Any]) -> int:
    """Degree, with the zero polynomial at -1."""
    return len(cs) - 1


def add(a: Sequence[Any], b: Sequence[Any]) -> Poly:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        if i < len(a) and i < len(b):
            out.append(a[i] + b[i])
        elif i < len(a):
            out.append(a[i])
        else:
            out.append(b[i])
    return trim(out)


def neg(a: Sequence[Any]) -> Poly:
    return [-c for c in a]


def sub(a: Sequence[Any], b: Sequence[Any]) -> Poly:
    return add(a, neg(b))


def scale(a: Sequence[Any], s: Any) -> Poly:
    if not s:
        return []
    return trim([c * s for c in a])


def mul(a: Sequence[Any], b: Sequence[Any]) -> Poly:
    if not a or not b:
        return []
    out = [None] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if not ca:
            continue
        for j, cb in enumerate(b):
            t = ca * cb
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    zero = a[0] * 0
    return trim([zero if c is None else c for c in out])


def evaluate(cs: Sequence[Any], x: Any) -> Any:
    """Horner evaluation; x may live in a larger ring than the coefficients."""
    if not cs:
        return x * 0
    acc = cs[-1] + x * 0
    for c in reversed(cs[:-1]):
        acc = acc * x + c
    return acc


def divmod_poly(num: Sequence[Any], den: Sequence[Any]):
    """Quotient and remainder; the leading coefficient of den must be a unit."""
    den = trim(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    num = list(num)
    inv_lead = den[-1] ** -1
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [], trim(num)
    q = [num[0] * 0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if not c:
            continue
        f = c * inv_lead
        q[i - dd] = f
        for j, dc in enumerate(den):
            num[i - dd + j] = num[i - dd + j] - f * dc
    return trim(q), trim(num)


def mod(num: Sequence[Any], den: Sequence[Any]) -> Poly:
    return divmod_poly(num, den)[1]


def monic(a: Sequence[Any]) -> Poly:
    a = trim(a)
    if not a:
        return a
    inv = a[-1] ** -1
    return [c * inv for c in a]


def gcd(a: Sequence[Any], b: Sequence[Any]) -> Poly:
    """Monic gcd via the Euclidean algorithm (coefficients in a field)."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, mod(a, b)
    return monic(a)


def xgcd(a: Sequence[Any], b: Sequence[Any]):
    """(g, s, t) with s*a + t*b = g, g monic (or zero)."""
    a, b = trim(a), trim(b)
    r0, r1 = list(a), list(b)
    s0, s1 = [], []
    t0, t1 = [], []
    if a:
        one = a[-1] ** -1 * a[-1]
        s0 = [one]
        t1_seed = one
    elif b:
        one = b[-1] ** -1 * b[-1]
        t1_seed = one
    else:
        return [], [], []
    t1 = [t1_seed]
    if not a:
        s1 = []
    while r1:
        q, r = divmod_poly(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    if not r0:
        return [], [], []
    inv = r0[-1] ** -1
    return [c * inv for c in r0], scale(s0, inv), scale(t0, inv)


def derivative(a: Sequence[Any]) -> Poly:
    return trim([a[i] * i for i in range(1, len(a))])


def squarefree_part(a: Sequence[Any]) -> Poly:
    """Monic product of the distinct irreducible factors (characteristic 0)."""
    a = trim(a)
    if len(a) <= 1:
        return monic(a)
    g = gcd(a, derivative(a))
    q, r = divmod_poly(a, g)
    if r:
        raise ArithmeticError("gcd does not divide its argument")
    return monic(q)


def power(a: Sequence[Any], e: int) -> Poly:
    if e < 0:
        raise ValueError("negative polynomial power")
    a = trim(a)
    if not a:
        if e == 0:
            raise ValueError("0**0 is undefined for polynomials")
        return []
    if e == 0:
        return [a[-1] ** -1 * a[-1]]
    acc = None
    base = list(a)
    while e:
        if e & 1:
            acc = list(base) if acc is None else mul(acc, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return acc
