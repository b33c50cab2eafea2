"""Rational functions in one variable over the rationals.

The textual grammar (used in scheme definition files and on the command
line) is

    expr     := term (('+' | '-') term)*
    term     := factor (('*' | '/') factor)*
    factor   := '-'* base
    base     := atom ('^' exponent)?
    exponent := '-'? INTEGER
    atom     := INTEGER | 'λ' | 'lambda' | '(' expr ')'

with the usual precedence.  The variable renders as "λ"; "lambda" is an
accepted input spelling for plain-ASCII files.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

from . import polynomials as pl

QPoly = list  # list of Fraction, constant term first

_ONE: QPoly = [Fraction(1)]


def _qtrim(p: QPoly) -> QPoly:
    return pl.trim([Fraction(c) for c in p])


class RationalFunction:
    """Quotient of two rational polynomials, kept in lowest terms with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        n = _qtrim(list(num))
        d = _qtrim(list(den)) if den is not None else list(_ONE)
        if not d:
            raise ZeroDivisionError("zero denominator")
        g = pl.gcd(n, d)
        if pl.degree(g) > 0:
            n, _ = pl.divmod_poly(n, g)
            d, _ = pl.divmod_poly(d, g)
        if d:
            lead = d[-1]
            if lead != 1:
                n = [c / lead for c in n]
                d = [c / lead for c in d]
        self.num = tuple(n)
        self.den = tuple(d)

    @classmethod
    def constant(cls, value) -> "RationalFunction":
        return cls([Fraction(value)])

    @classmethod
    def variable(cls) -> "RationalFunction":
        return cls([Fraction(0), Fraction(1)])

    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return pl.degree(list(self.num)) <= 0 and pl.degree(list(self.den)) == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num[0] if self.num else Fraction(0)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.constant(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = pl.add(pl.mul(list(self.num), list(o.den)), pl.mul(list(o.num), list(self.den)))
        return RationalFunction(n, pl.mul(list(self.den), list(o.den)))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(pl.neg(list(self.num)), list(self.den))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(pl.mul(list(self.num), list(o.num)), pl.mul(list(self.den), list(o.den)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(pl.mul(list(self.num), list(o.den)), pl.mul(list(self.den), list(o.num)))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            if self.is_zero():
                raise ZeroDivisionError("0 to a negative power")
            return RationalFunction(list(self.den), list(self.num)) ** (-e)
        result = RationalFunction.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def derivative(self) -> "RationalFunction":
        n, d = list(self.num), list(self.den)
        top = pl.sub(pl.mul(pl.derivative(n), d), pl.mul(n, pl.derivative(d)))
        return RationalFunction(top, pl.mul(d, d))

    def evaluate_pair(self, value, one):
        """Numerator and denominator evaluated at `value`, no division performed.

        `one` is the multiplicative identity of the target ring.
        """
        num_v = _eval_qpoly(list(self.num), value, one)
        den_v = _eval_qpoly(list(self.den), value, one)
        return num_v, den_v

    def evaluate(self, value, one=None):
        if one is None:
            one = value ** 0
        num_v, den_v = self.evaluate_pair(value, one)
        return num_v * (den_v ** -1)

    def __str__(self) -> str:
        n = poly_to_str(list(self.num))
        if pl.degree(list(self.den)) == 0 and self.den[0] == 1:
            return n
        d = poly_to_str(list(self.den))
        return "(%s)/(%s)" % (n, d)

    def __repr__(self) -> str:
        return "RationalFunction(%s)" % self

    def to_json(self) -> str:
        return str(self)

    @classmethod
    def parse(cls, text: str) -> "RationalFunction":
        return _Parser(text).parse()


def _eval_qpoly(p: QPoly, value, one):
    acc = one - one
    for c in reversed(p):
        acc = acc * value + c * one
    return acc


def poly_to_str(p: QPoly) -> str:
    """Render a rational polynomial so that parse(render(p)) == p."""
    if not p:
        return "0"
    parts = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = _frac_str(mag)
        else:
            var = "λ" if k == 1 else "λ^%d" % k
            body = var if mag == 1 else "%s*%s" % (_frac_str(mag), var)
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = (first_body if first_sign == "+" else "-" + first_body)
    for sign, body in parts[1:]:
        out += " %s %s" % (sign, body)
    return out


def _frac_str(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return "%d/%d" % (f.numerator, f.denominator)


def rational_roots(p: QPoly) -> list:
    """All rational roots of a rational polynomial, by the rational root theorem."""
    p = _qtrim(list(p))
    if pl.degree(p) < 1:
        return []
    roots = []
    shift = 0
    while p[0] == 0:
        p = p[1:]
        shift = 1
    if shift:
        roots.append(Fraction(0))
    if pl.degree(p) < 1:
        return roots
    lcm_den = 1
    for c in p:
        lcm_den = lcm_den * c.denominator // _int_gcd(lcm_den, c.denominator)
    ints = [int(c * lcm_den) for c in p]
    content = 0
    for c in ints:
        content = _int_gcd(content, abs(c))
    ints = [c // content for c in ints]
    for num in _divisors_of(abs(ints[0])):
        for den in _divisors_of(abs(ints[-1])):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in roots and pl.evaluate(p, cand) == 0:
                    roots.append(cand)
    return sorted(roots)


def _divisors_of(n: int) -> list:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return out


def _int_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a if a else 1


_SYMBOLS = set("+-*/^()")


def _tokenize(text: str) -> Iterator[tuple]:
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _SYMBOLS:
            yield ("sym", ch)
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            yield ("int", int(text[i:j]))
            i = j
            continue
        if ch == "λ":
            yield ("var", "λ")
            i += 1
            continue
        if ch.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            word = text[i:j]
            if word != "lambda":
                raise ValueError("unknown identifier %r in rational function" % word)
            yield ("var", "λ")
            i = j
            continue
        raise ValueError("unexpected character %r in rational function" % ch)
    yield ("end", None)


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_sym(self, sym: str):
        kind, val = self.next()
        if kind != "sym" or val != sym:
            raise ValueError("expected %r, found %r" % (sym, val))

    def parse(self) -> RationalFunction:
        value = self.expr()
        kind, val = self.peek()
        if kind != "end":
            raise ValueError("trailing input %r in rational function" % (val,))
        return value

    def expr(self) -> RationalFunction:
        value = self.term()
        while True:
            kind, val = self.peek()
            if kind == "sym" and val in "+-":
                self.next()
                rhs = self.term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def term(self) -> RationalFunction:
        value = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "sym" and val in "*/":
                self.next()
                rhs = self.factor()
                value = value * rhs if val == "*" else value / rhs
            else:
                return value

    def factor(self) -> RationalFunction:
        negate = False
        while True:
            kind, val = self.peek()
            if kind == "sym" and val == "-":
                self.next()
                negate = not negate
            elif kind == "sym" and val == "+":
                self.next()
            else:
                break
        value = self.base()
        return -value if negate else value

    def base(self) -> RationalFunction:
        value = self.atom()
        kind, val = self.peek()
        if kind == "sym" and val == "^":
            self.next()
            value = value ** self.exponent()
        return value

    def exponent(self) -> int:
        sign = 1
        kind, val = self.peek()
        if kind == "sym" and val == "-":
            self.next()
            sign = -1
        kind, val = self.next()
        if kind != "int":
            raise ValueError("expected integer exponent, found %r" % (val,))
        return sign * val

    def atom(self) -> RationalFunction:
        kind, val = self.next()
        if kind == "int":
            return RationalFunction.constant(val)
        if kind == "var":
            return RationalFunction.variable()
        if kind == "sym" and val == "(":
            inner = self.expr()
            self.expect_sym(")")
            return inner
        raise ValueError("unexpected token %r in rational function" % (val,))
