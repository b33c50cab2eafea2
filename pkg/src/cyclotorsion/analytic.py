"""Periods by AGM, Weierstrass functions, elliptic log, Betti coordinates.

Conventions fixed here, once:
  * the curve is y² = x³ + a x² + b x + c; depressed coordinates are
    X = x + a/3, so the ℘-values at half periods are (cubic root) + a/3;
  * the lattice basis is Gauss-reduced with Im τ > 0, |Re τ| ≤ 1/2,
    |τ| ≥ 1, ties pushed off the left boundary, and ω₁ rotated so that
    Re ω₁ > 0 (or Re ω₁ = 0 and Im ω₁ > 0);
  * every constructed lattice is verified before being returned: the ℘
    values at the three half periods must reproduce the cubic's roots, the
    differential equation ℘′² = 4(℘−e₁)(℘−e₂)(℘−e₃) must hold at a probe
    point, and the theta relation (π/ω₁)²·θ₃⁴ = e₁ − e₃ must close.

All ℘ evaluations run the q-expansion with q = e^{2πiτ}; after reduction
Im τ ≥ √3/2, so |q| ≤ e^{−π√3} and a few dozen terms suffice at 256 bits.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple

import mpmath

from .errors import PrecisionExhausted

GUARD_BITS = 96


def _eps(prec: int) -> mpmath.mpf:
    return mpmath.mpf(2) ** (-prec)


def to_mpc(v) -> mpmath.mpc:
    """Numeric coercion that also accepts Fraction and complex."""
    if isinstance(v, Fraction):
        return mpmath.mpc(mpmath.mpf(v.numerator) / mpmath.mpf(v.denominator))
    if isinstance(v, complex):
        return mpmath.mpc(v.real, v.imag)
    return mpmath.mpc(v)


def _horner_numeric(coeffs: Sequence[Fraction], lam) -> mpmath.mpc:
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * lam + mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
    return acc


def evaluate_ratfunc(f, lam) -> mpmath.mpc:
    """Evaluate a rational function in λ at an mpmath number."""
    lam = to_mpc(lam)
    den = _horner_numeric(f.den, lam)
    if den == 0:
        raise ZeroDivisionError("pole of the coefficient function")
    return _horner_numeric(f.num, lam) / den


def optimal_agm(a, b, prec: int):
    """AGM with the branch of each square root chosen so |a'−b'| ≤ |a'+b'|."""
    a, b = mpmath.mpc(a), mpmath.mpc(b)
    if a == 0 or b == 0:
        raise ZeroDivisionError("AGM of zero")
    tol = _eps(prec + 8)
    for _ in range(prec.bit_length() * 8 + 40):
        if abs(a - b) <= tol * abs(a):
            return (a + b) / 2
        mean = (a + b) / 2
        root = mpmath.sqrt(a * b)
        d_plus, d_minus = abs(mean - root), abs(mean + root)
        if d_plus > d_minus:
            root = -root
        elif d_plus == d_minus and mpmath.im(root / mean) < 0:
            root = -root
        a, b = mean, root
    raise PrecisionExhausted("AGM failed to converge at %d bits" % prec)


def _p_series(tau, b1, b2):
    """(℘, ℘′) of z = (b1 + b2·τ)·1 for the lattice Z + τZ, via the q-expansion."""
    two_pi_i = 2 * mpmath.pi * mpmath.mpc(0, 1)
    q = mpmath.exp(two_pi_i * tau)
    u = mpmath.exp(two_pi_i * (b1 + b2 * tau))
    if u == 1:
        raise ZeroDivisionError("z lies in the lattice")
    one = mpmath.mpf(1)
    p_acc = mpmath.mpf(1) / 12 + u / (1 - u) ** 2
    pp_acc = u * (1 + u) / (1 - u) ** 3
    qn = one
    eps = mpmath.mpf(2) ** (-mpmath.mp.prec - 8)
    for n in range(1, 4000):
        qn = qn * q
        qu = qn * u
        qiu = qn / u
        p_term = qu / (1 - qu) ** 2 + qiu / (1 - qiu) ** 2 - 2 * qn / (1 - qn) ** 2
        pp_term = qu * (1 + qu) / (1 - qu) ** 3 - qiu * (1 + qiu) / (1 - qiu) ** 3
        p_acc += p_term
        pp_acc += pp_term
        if abs(p_term) < eps * (1 + abs(p_acc)) and abs(pp_term) < eps * (1 + abs(pp_acc)):
            break
    else:
        raise PrecisionExhausted("q-series did not converge; is the basis reduced?")
    return two_pi_i ** 2 * p_acc, two_pi_i ** 3 * pp_acc


class PeriodLattice:
    """Verified period lattice of y² = x³ + a x² + b x + c over C."""

    __slots__ = ("omega1", "omega2", "tau", "prec", "err", "a", "b", "c",
                 "shift", "roots")

    def __init__(self, omega1, omega2, tau, prec, err, a, b, c, shift, roots):
        self.omega1 = omega1
        self.omega2 = omega2
        self.tau = tau
        self.prec = prec
        self.err = err
        self.a = a
        self.b = b
        self.c = c
        self.shift = shift
        self.roots = roots  # cubic roots ordered to match half_periods()

    def half_periods(self) -> Tuple:
        return (self.omega1 / 2, (self.omega1 + self.omega2) / 2, self.omega2 / 2)

    def depressed_roots(self) -> Tuple:
        return tuple(r + self.shift for r in self.roots)

    def coordinates(self, z) -> Tuple[mpmath.mpf, mpmath.mpf]:
        """Real (b1, b2) with z = b1·ω₁ + b2·ω₂, not yet reduced mod 1."""
        u = mpmath.mpc(z) / self.omega1
        b2 = mpmath.im(u) / mpmath.im(self.tau)
        b1 = mpmath.re(u) - b2 * mpmath.re(self.tau)
        return b1, b2

    def is_lattice_point(self, z, slack: int = 16) -> bool:
        with mpmath.workprec(self.prec + GUARD_BITS):
            b1, b2 = self.coordinates(z)
            tol = _eps(self.prec - slack)
            return (abs(b1 - mpmath.nint(b1)) < tol and abs(b2 - mpmath.nint(b2)) < tol)

    def p_value(self, z):
        return self._p_both(z)[0]

    def p_prime(self, z):
        return self._p_both(z)[1]

    def _p_both(self, z):
        with mpmath.workprec(self.prec + GUARD_BITS):
            b1, b2 = self.coordinates(z)
            b1 -= mpmath.nint(b1)
            b2 -= mpmath.nint(b2)
            p_dim, pp_dim = _p_series(self.tau, b1, b2)
            w1 = self.omega1
            return +(p_dim / w1 ** 2), +(pp_dim / w1 ** 3)

    def exp_point(self, z):
        """Curve point (x, y) of the exponential at z; None when z ∈ Λ (infinity)."""
        if self.is_lattice_point(z):
            return None
        with mpmath.workprec(self.prec + GUARD_BITS):
            p, pp = self._p_both(z)
            return +(p - self.shift), +(pp / 2)

    def log_point(self, x0, y0):
        """z in the fundamental parallelogram with exp_point(z) = (x0, y0)."""
        with mpmath.workprec(self.prec + GUARD_BITS):
            x0 = mpmath.mpc(x0)
            y0 = mpmath.mpc(y0)
            e = self.depressed_roots()
            X0 = x0 + self.shift
            scale = 1 + max(abs(v) for v in e) + abs(X0)
            tol = _eps(self.prec // 2) * scale
            if abs(y0) < tol:
                dists = [abs(x0 - r) for r in self.roots]
                idx = min(range(3), key=lambda i: dists[i])
                if dists[idx] < tol:
                    return self._reduce(self.half_periods()[idx])
            z = self._log_carlson(X0, y0)
            if z is None:
                z = self._log_newton(X0, y0)
            if z is None:
                raise PrecisionExhausted("elliptic log did not converge at %d bits" % self.prec)
            return self._reduce(z)

    def _verify_log(self, z, X0, y0) -> bool:
        p, pp = self._p_both(z)
        scale = 1 + abs(X0) + abs(pp)
        return abs(p - X0) < _eps(self.prec - 12) * scale and \
            abs(pp - 2 * y0) < _eps(self.prec - 12) * scale

    def _log_carlson(self, X0, y0):
        e1, e2, e3 = self.depressed_roots()
        try:
            v = mpmath.elliprf(X0 - e1, X0 - e2, X0 - e3)
        except (mpmath.libmp.NoConvergence, ZeroDivisionError, ValueError):
            return None
        for cand in (v, -v):
            if self._verify_log(cand, X0, y0):
                return cand
        return None

    def _log_newton(self, X0, y0):
        # grid starts over the fundamental parallelogram, then Newton on ℘
        step_tol = _eps(self.prec + 8) * abs(self.omega1)
        for s_num, t_num in itertools.product(range(1, 10), range(1, 10)):
            z = (mpmath.mpf(s_num) / 10 + mpmath.mpf(t_num) / 10 * self.tau) * self.omega1
            converged = False
            for _ in range(80):
                try:
                    p, pp = self._p_both(z)
                except (ZeroDivisionError, PrecisionExhausted):
                    break
                if pp == 0:
                    break
                delta = (p - X0) / pp
                z = z - delta
                if abs(delta) < step_tol:
                    converged = True
                    break
            if not converged:
                continue
            p, pp = self._p_both(z)
            if abs(pp - 2 * y0) > abs(pp + 2 * y0):
                z = -z
            if self._verify_log(z, X0, y0):
                return z
        return None

    def _reduce(self, z):
        b1, b2 = self.coordinates(z)
        b1 -= mpmath.floor(b1)
        b2 -= mpmath.floor(b2)
        return +( (b1 + b2 * self.tau) * self.omega1 )


def _gauss_reduce(omega1, omega2, prec: int):
    tau = omega2 / omega1
    if mpmath.im(tau) == 0:
        raise PrecisionExhausted("degenerate basis")
    if mpmath.im(tau) < 0:
        omega2 = -omega2
        tau = -tau
    edge = _eps(prec - 8)
    for _ in range(500):
        n = int(mpmath.nint(mpmath.re(tau)))
        if n:
            omega2 = omega2 - n * omega1
            tau = tau - n
        if abs(tau) < 1 - edge:
            omega1, omega2 = omega2, -omega1
            tau = -1 / tau
            continue
        break
    else:
        raise PrecisionExhausted("basis reduction did not terminate")
    # boundary normalization: left edge to right edge, circle arc to Re ≥ 0
    if abs(mpmath.re(tau) + mpmath.mpf(1) / 2) < edge:
        omega2 = omega2 + omega1
        tau = tau + 1
    if abs(abs(tau) - 1) < edge and mpmath.re(tau) < -edge:
        omega1, omega2 = omega2, -omega1
        tau = -1 / tau
    # boundaries of the tau domain admit several bases (extra automorphisms
    # at tau = i and tau = e^{iπ/3}); break the tie by the oriented omega1
    # with lexicographically largest (Re, Im)
    candidates = [(omega1, omega2)]
    on_arc = abs(abs(tau) - 1) < edge
    if on_arc:
        candidates.append((omega2, -omega1))
    if on_arc and abs(mpmath.re(tau) - mpmath.mpf(1) / 2) < edge:
        candidates.append((omega2 - omega1, -omega1))
    best = None
    for w1, w2 in candidates:
        re1 = mpmath.re(w1)
        if re1 < -edge or (abs(re1) <= edge and mpmath.im(w1) < 0):
            w1, w2 = -w1, -w2
        key = (mpmath.re(w1), mpmath.im(w1))
        if best is None or key > best[0]:
            best = (key, w1, w2)
    omega1, omega2 = best[1], best[2]
    return omega1, omega2, omega2 / omega1


def period_lattice(a, b, c, prec: int = 128) -> PeriodLattice:
    """Verified Gauss-reduced period lattice; raises PrecisionExhausted on failure."""
    if prec < 64:
        raise ValueError("precision below 64 bits is not supported")
    with mpmath.workprec(prec + GUARD_BITS):
        a_c, b_c, c_c = to_mpc(a), to_mpc(b), to_mpc(c)
        disc = (18 * a_c * b_c * c_c - 4 * a_c ** 3 * c_c + a_c ** 2 * b_c ** 2
                - 4 * b_c ** 3 - 27 * c_c ** 2)
        if abs(disc) < _eps(prec):
            raise ValueError("curve is numerically singular")
        roots = mpmath.polyroots([1, a_c, b_c, c_c], maxsteps=200, extraprec=prec)
        shift = a_c / 3
        e = [r + shift for r in roots]
        scale = 1 + max(abs(v) for v in e)
        tol = _eps(prec + 24) * scale
        for perm in itertools.permutations(range(3)):
            e1, e2, e3 = e[perm[0]], e[perm[1]], e[perm[2]]
            try:
                m1 = optimal_agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e1 - e2), prec + 64)
                m2 = optimal_agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e2 - e3), prec + 64)
            except (ZeroDivisionError, PrecisionExhausted):
                continue
            if m1 == 0 or m2 == 0:
                continue
            omega1 = mpmath.pi / m1
            omega2 = mpmath.pi * mpmath.mpc(0, 1) / m2
            try:
                w1, w2, tau = _gauss_reduce(omega1, omega2, prec)
            except PrecisionExhausted:
                continue
            candidate = PeriodLattice(w1, w2, tau, prec, None, a_c, b_c, c_c, shift,
                                      tuple(roots))
            matched = _match_half_periods(candidate, roots, shift, tol * 2 ** 12)
            if matched is None:
                continue
            ordered_roots, err = matched
            lattice = PeriodLattice(w1, w2, tau, prec, err, a_c, b_c, c_c, shift,
                                    ordered_roots)
            final_err = _verify_lattice(lattice, err)
            if final_err is not None:
                lattice.err = final_err
                return lattice
        raise PrecisionExhausted("no square-root branch assignment produced the period lattice")


def _match_half_periods(lattice: PeriodLattice, roots, shift, tol):
    try:
        values = [lattice.p_value(hp) for hp in lattice.half_periods()]
    except (PrecisionExhausted, ZeroDivisionError):
        return None
    targets = [r + shift for r in roots]
    order: List[int] = []
    err = mpmath.mpf(0)
    for v in values:
        dists = [abs(v - t) for t in targets]
        idx = min(range(3), key=lambda i: dists[i])
        if idx in order or dists[idx] > tol:
            return None
        order.append(idx)
        err = max(err, dists[idx])
    return tuple(roots[i] for i in order), err


def _verify_lattice(lattice: PeriodLattice, base_err) -> Optional[mpmath.mpf]:
    prec = lattice.prec
    e1, e2, e3 = lattice.depressed_roots()
    scale = 1 + max(abs(e1), abs(e2), abs(e3))
    tol = _eps(prec - 16) * scale
    # differential equation at a probe point
    z = (mpmath.mpf(31) / 100 + mpmath.mpf(27) / 100 * lattice.tau) * lattice.omega1
    p, pp = lattice._p_both(z)
    lhs = pp * pp
    rhs = 4 * (p - e1) * (p - e2) * (p - e3)
    ode_err = abs(lhs - rhs) / (1 + abs(lhs))
    if ode_err > tol:
        return None
    # theta relation with the nome of the reduced tau
    q = mpmath.exp(mpmath.pi * mpmath.mpc(0, 1) * lattice.tau)
    theta3 = mpmath.jtheta(3, 0, q)
    theta_err = abs((mpmath.pi / lattice.omega1) ** 2 * theta3 ** 4 - (e1 - e3))
    if theta_err > tol * scale:
        return None
    return max(base_err, ode_err, theta_err)


class LatticeCache:
    """Shared read-mostly cache keyed by exact coefficient reprs and precision."""

    def __init__(self):
        self._store = {}

    def get(self, a, b, c, prec: int) -> PeriodLattice:
        key = (repr(to_mpc(a)), repr(to_mpc(b)), repr(to_mpc(c)), prec)
        lattice = self._store.get(key)
        if lattice is None:
            lattice = period_lattice(a, b, c, prec)
            self._store[key] = lattice
        return lattice


class BettiCoords(NamedTuple):
    b1: mpmath.mpf
    b2: mpmath.mpf
    err: mpmath.mpf


def betti_coordinates(lattice: PeriodLattice, z, tie_bits: int = 8) -> BettiCoords:
    """(b₁, b₂) in [0,1)² with z ≡ b₁ω₁ + b₂ω₂; near-1 values snap to 0."""
    with mpmath.workprec(lattice.prec + GUARD_BITS):
        b1, b2 = lattice.coordinates(z)
        out = []
        tie = _eps(lattice.prec - tie_bits)
        for v in (b1, b2):
            frac = v - mpmath.floor(v)
            if 1 - frac < tie or frac < tie:
                frac = mpmath.mpf(0)
            out.append(+frac)
        return BettiCoords(out[0], out[1], lattice.err or _eps(lattice.prec))


def elliptic_exp(lattice: PeriodLattice, z):
    """Curve point (x, y) at z, or None for the point at infinity (z in the lattice)."""
    return lattice.exp_point(z)


def elliptic_log(lattice: PeriodLattice, point) -> mpmath.mpc:
    """Log of a curve point; the point at infinity (None) maps to z = 0."""
    if point is None:
        return mpmath.mpc(0)
    x0, y0 = point
    return lattice.log_point(x0, y0)


def a_coordinates(values: Sequence, prec: int = 128) -> List[mpmath.mpc]:
    """Principal-branch log(x)/2πi per coordinate; real mod Z on the unit circle."""
    out = []
    with mpmath.workprec(prec + 16):
        two_pi_i = 2 * mpmath.pi * mpmath.mpc(0, 1)
        for x in values:
            x = mpmath.mpc(x)
            if x == 0:
                raise ValueError("a-coordinate of zero")
            out.append(+(mpmath.log(x) / two_pi_i))
    return out


class LogPoint:
    """The assembled logarithm data (b₁, b₂, a₁…a_n) with its error bound."""

    __slots__ = ("b1", "b2", "a", "err")

    def __init__(self, b1, b2, a, err):
        self.b1 = b1
        self.b2 = b2
        self.a = list(a)
        self.err = err

    def to_json_dict(self) -> dict:
        return {
            "b1": mpmath.nstr(self.b1, 40),
            "b2": mpmath.nstr(self.b2, 40),
            "a": [[mpmath.nstr(mpmath.re(v), 40), mpmath.nstr(mpmath.im(v), 40)]
                  for v in self.a],
            "err": mpmath.nstr(self.err, 10),
        }


def theta_map(scheme, lam0, eps_values: Sequence, cache: Optional[LatticeCache],
              prec: int = 128, consistency=None) -> LogPoint:
    """Betti coordinates of the section's log at λ₀ plus a-coordinates of ε.

    When `consistency` is a rational function f, demands f(λ₀) = Σ εⱼ.
    """
    if cache is None:
        cache = LatticeCache()
    with mpmath.workprec(prec + GUARD_BITS):
        lam0 = to_mpc(lam0)
        if consistency is not None:
            total = sum(to_mpc(v) for v in eps_values)
            gap = abs(evaluate_ratfunc(consistency, lam0) - total)
            if gap > _eps(prec // 2):
                raise ValueError("f(lambda0) does not match the coordinate sum")
        a0 = evaluate_ratfunc(scheme.a, lam0)
        b0 = evaluate_ratfunc(scheme.b, lam0)
        c0 = evaluate_ratfunc(scheme.c, lam0)
        x0 = evaluate_ratfunc(scheme.section_x, lam0)
        w0 = evaluate_ratfunc(scheme.section_y_square, lam0)
        y0 = mpmath.sqrt(w0)
        lattice = cache.get(a0, b0, c0, prec)
        z = lattice.log_point(x0, y0)
        bc = betti_coordinates(lattice, z)
        a_vals = a_coordinates(eps_values, prec)
        return LogPoint(bc.b1, bc.b2, a_vals, lattice.err or _eps(prec))


def mpf_to_fraction(x) -> Fraction:
    if isinstance(x, (int, float, Fraction)):
        return Fraction(x)
    if not isinstance(x, mpmath.mpf):
        # conversion may round at the ambient precision; exact types never reach it
        x = mpmath.mpf(x)
    if x == 0:
        return Fraction(0)
    sign, man, exp, _ = x._mpf_
    if man == 0:
        raise ValueError("not a finite number")
    value = Fraction(int(man), 1) * Fraction(2) ** int(exp)
    return -value if sign else value


def rational_reconstruct(r, q_max: int, tol) -> Optional[Fraction]:
    """The unique p/q with q ≤ q_max and |r − p/q| ≤ tol, or None.

    Demands tol < 1/(2·q_max²); any admissible answer is then a continued
    fraction convergent, so scanning convergents is exhaustive.
    """
    if q_max < 1:
        raise ValueError("q_max must be positive")
    tol_f = tol if isinstance(tol, Fraction) else mpf_to_fraction(tol)
    if not tol_f < Fraction(1, 2 * q_max * q_max):
        raise ValueError("tolerance too coarse for uniqueness at this q_max")
    x = r if isinstance(r, Fraction) else mpf_to_fraction(r)
    h_m2, h_m1 = 0, 1
    k_m2, k_m1 = 1, 0
    rest = x
    for _ in range(10_000):
        a0 = rest.numerator // rest.denominator
        h = a0 * h_m1 + h_m2
        k = a0 * k_m1 + k_m2
        if k > q_max:
            return None
        cand = Fraction(h, k)
        if abs(x - cand) <= tol_f:
            return cand
        frac_part = rest - a0
        if frac_part == 0:
            return None
        rest = 1 / frac_part
        h_m2, h_m1 = h_m1, h
        k_m2, k_m1 = k_m1, k
    return None
