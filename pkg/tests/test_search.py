"""The search pipeline: enumeration, fiber solving, certificates, certify."""

import math
from fractions import Fraction

import pytest

from cyclotorsion.cyclotomic import RootOfUnityTuple
from cyclotorsion.elliptic import (
    CurvePoint,
    QuadRing,
    WeierstrassCurve,
    _NormZero,
    legendre_scheme,
    point_add,
    torsion_prescreen,
)
from cyclotorsion.errors import BadReductionError, BudgetExceeded, ZeroDivisorSplit
from cyclotorsion.extension import reduce_mod_prime, split_tower
from cyclotorsion.finitefield import primes_congruent_one
from cyclotorsion.ratfunc import RationalFunction
from cyclotorsion.search import (
    SearchConfig,
    TorsionCertificate,
    certify,
    enumerate_tuples,
    identity_function,
    run_search,
    run_search_on_tuples,
    search_report,
    solve_fiber,
)

TWELVE_TUPLE = RootOfUnityTuple(8, [1] * 4 + [7] * 4 + [4] * 4)


def small_config(**kw):
    defaults = dict(n=2, N_max=2, T_max=4, precision=128)
    defaults.update(kw)
    return SearchConfig(**defaults)


class TestEnumerateTuples:
    def test_n1_order2(self):
        ts = list(enumerate_tuples(1, 2))
        assert [(t.order, t.exponents) for t in ts] == [(1, (0,)), (2, (1,))]

    def test_n2_order2_multisets(self):
        assert len(list(enumerate_tuples(2, 2))) == 3

    def test_skip_filter_drops_vanishing_total(self):
        ts = list(enumerate_tuples(2, 2, skip_vanishing_subsums=True))
        assert len(ts) == 2
        for t in ts:
            assert not t.sum().is_zero()

    def test_n2_order4_count(self):
        # multisets of size 2 over the 4 fourth roots of unity
        assert len(list(enumerate_tuples(2, 4))) == math.comb(4 + 2 - 1, 2) == 10

    def test_budget_and_resume_cover_the_range(self):
        full = list(enumerate_tuples(2, 4))
        head = []
        token = None
        try:
            for t in enumerate_tuples(2, 4, budget=4):
                head.append(t)
        except BudgetExceeded as exc:
            token = exc.resume_token
        assert token is not None and len(head) == 4
        tail = list(enumerate_tuples(2, 4, start=int(token)))
        assert head + tail == full

    def test_rejects_empty_bounds(self):
        with pytest.raises(ValueError):
            list(enumerate_tuples(0, 4))


class TestSolveFiber:
    def test_identity_map(self):
        sol = solve_fiber(RationalFunction.variable(), Fraction(2))
        assert sol.tower.relative_degree == 1
        assert sol.tower.gen().rational_value() == 2

    def test_square_map(self):
        sol = solve_fiber(RationalFunction.parse("λ^2"), Fraction(2))
        # y² − 2 stays irreducible over the rationals
        assert sol.tower.relative_degree == 2
        assert sol.roots(64)

    def test_multiplicity_is_reported(self):
        f = RationalFunction.parse("(λ^2 + 1)/(λ)")
        sol = solve_fiber(f, Fraction(2))
        assert sol.reduced_degree == 1
        assert sol.original_degree == 2
        assert sol.tower.gen().rational_value() == 1

    def test_degree_drop_leaves_empty_fiber(self):
        # (λ+1)/λ = 1 has no affine solution: the leading terms cancel
        f = RationalFunction.parse("(λ + 1)/(λ)")
        assert solve_fiber(f, Fraction(1)) is None

    def test_constant_map_rejected(self):
        with pytest.raises(ValueError):
            solve_fiber(RationalFunction.constant(3), Fraction(2))

    def test_empty_fiber(self):
        f = RationalFunction.parse("(λ^2 + 1)/(λ^2)")
        assert solve_fiber(f, Fraction(1)) is None


class TestIdentityFunction:
    def test_two_torsion_identity_is_section_y_square(self):
        sch = legendre_scheme()
        assert identity_function(sch, 2) == RationalFunction.parse("4 - 2*λ")

    def test_three_torsion_identity(self):
        sch = legendre_scheme()
        expected = RationalFunction.parse("16 - 8*λ - λ^2")
        assert identity_function(sch, 3) == expected

    def test_orders_below_two_rejected(self):
        with pytest.raises(ValueError):
            identity_function(legendre_scheme(), 1)


class TestRunSearch:
    def test_two_torsion_certificate_at_lambda_two(self):
        certs = run_search(small_config())
        assert len(certs) == 1
        c = certs[0]
        assert c.tuple.exponents == (0, 0)  # ε = (1, 1)
        assert c.tower.gen().rational_value() == 2
        assert c.curve_order == 2
        assert c.combined_order == 2
        assert c.betti_b1 == Fraction(1, 2) and c.betti_b2 == 0
        assert c.no_vanishing_subsum
        assert certify(c).ok

    def test_single_roots_up_to_order_four_find_nothing(self):
        # λ ∈ {1, −1, ±i}: λ=1 is a bad fiber, the rest carry no torsion ≤ 8
        cfg = SearchConfig(n=1, N_max=4, T_max=8, skip_vanishing_subsums=True)
        assert run_search(cfg) == []

    def test_output_is_sorted_and_deterministic(self):
        cfg = SearchConfig(n=2, N_max=4, T_max=4)
        a = [c.canonical() for c in run_search(cfg)]
        b = [c.canonical() for c in run_search(cfg)]
        assert a == b
        keys = [TorsionCertificate.from_json_dict(c.to_json_dict()).sort_key()
                for c in run_search(cfg)]
        assert keys == sorted(keys)

    def test_parallel_merge_matches_serial(self):
        cfg = SearchConfig(n=2, N_max=4, T_max=4)
        serial = [c.canonical() for c in run_search(cfg)]
        parallel = [c.canonical() for c in run_search(cfg, jobs=2)]
        assert serial == parallel

    def test_stabilization_beyond_largest_order(self):
        low = run_search(small_config(T_max=4))
        high = run_search(small_config(T_max=8))
        assert [c.canonical() for c in low] == [c.canonical() for c in high]
        report = search_report(small_config(T_max=8), high)
        assert report["stabilization_T"] == 2
        assert report["complete_relative_to_T_max"]


@pytest.fixture(scope="module")
def cert():
    cfg = SearchConfig(n=12, N_max=8, T_max=8, precision=256)
    certs = run_search_on_tuples(cfg, [TWELVE_TUPLE])
    assert len(certs) == 1
    return certs[0]


class TestTwelveTupleCertificate:
    def test_certified_fields(self, cert):
        assert cert.curve_order == 3
        assert cert.tuple_order == 8
        assert cert.combined_order == 24
        assert cert.degree == 4
        assert cert.lambda_min_poly == "λ^2 + 8*λ - 16"

    def test_identity_is_the_quadratic(self, cert):
        parsed = RationalFunction.parse(cert.identity)
        assert parsed == RationalFunction.parse("16 - 8*λ - λ^2")

    def test_betti_thirds(self, cert):
        assert {cert.betti_b1, cert.betti_b2} <= {Fraction(0), Fraction(1, 3), Fraction(2, 3)}
        assert math.lcm(cert.betti_b1.denominator, cert.betti_b2.denominator) == 3

    def test_certify_passes(self, cert):
        assert certify(cert).ok

    def test_round_trip_preserves_digest(self, cert):
        again = TorsionCertificate.from_json_dict(cert.to_json_dict())
        assert again.digest() == cert.digest()
        assert certify(again).ok

    def test_tampered_order_fails_with_residue(self, cert):
        data = cert.to_json_dict()
        data["curve_order"] = 5
        tampered = TorsionCertificate.from_json_dict(data)
        result = certify(tampered)
        assert not result.ok
        checks = {f["check"] for f in result.failures}
        assert "division-value-vanishes" in checks
        residue = next(f["residue"] for f in result.failures
                       if f["check"] == "division-value-vanishes")
        assert residue and "coeffs" in residue

    def test_tampered_betti_fails(self, cert):
        data = cert.to_json_dict()
        data["betti"]["b1"], data["betti"]["b2"] = "1/3", "1/3"
        if Fraction(data["betti"]["b1"]) == cert.betti_b1 \
                and Fraction(data["betti"]["b2"]) == cert.betti_b2:
            data["betti"]["b2"] = "2/3"
        tampered = TorsionCertificate.from_json_dict(data)
        result = certify(tampered)
        assert any(f["check"] == "betti-rationality" for f in result.failures)


class TestPrescreenSoundness:
    def test_prescreen_never_rejects_certified_orders(self):
        certs = run_search(small_config())
        cfg = SearchConfig(n=12, N_max=8, T_max=8, precision=256)
        certs += run_search_on_tuples(cfg, [TWELVE_TUPLE])
        for c in certs:
            primes = primes_congruent_one(c.tower.base.order, 10007, 20)
            reductions = []
            for q in primes:
                try:
                    reductions.append(reduce_mod_prime(c.tower, q))
                except BadReductionError:
                    continue
            assert len(reductions) >= 15
            verdict = torsion_prescreen(c.scheme, reductions, c.curve_order)
            assert verdict == "pass"


def brute_section_order(sec, T_max):
    """Torsion order by repeated exact point_add, no division polynomials."""
    if sec.w.is_zero():
        curve, point = sec.curve, CurvePoint(sec.x0, sec.w.tower.zero())
    else:
        try:
            ring = QuadRing(sec.w)
            curve = WeierstrassCurve(ring.from_base(sec.curve.a),
                                     ring.from_base(sec.curve.b),
                                     ring.from_base(sec.curve.c))
            point = CurvePoint(ring.from_base(sec.x0), ring.gen())
            return _brute_walk(curve, point, T_max)
        except _NormZero as nz:
            y0 = nz.u / nz.v
            curve, point = sec.curve, CurvePoint(sec.x0, y0)
    return _brute_walk(curve, point, T_max)


def _brute_walk(curve, point, T_max):
    acc = point
    for m in range(2, T_max + 1):
        acc = point_add(curve, acc, point)
        if acc.is_infinity:
            return m
    return None


def brute_orders_for_tuple(scheme, f, t, T_max):
    sol = solve_fiber(f, t.sum())
    if sol is None:
        return []
    found = []
    stack = [sol.tower]
    while stack:
        tower = stack.pop()
        try:
            sec = scheme.specialize(tower.gen())
            order = brute_section_order(sec, T_max)
        except BadReductionError:
            continue
        except ZeroDivisorSplit as exc:
            stack.extend(split_tower(tower, exc.factor))
            continue
        if order is not None:
            found.extend([order] * tower.relative_degree)
    return sorted(found)


class TestOracleEquivalence:
    @pytest.mark.parametrize("n", [1, 2])
    def test_matches_point_add_oracle(self, n):
        cfg = SearchConfig(n=n, N_max=6, T_max=10)
        certs = run_search(cfg)
        by_tuple = {}
        for c in certs:
            by_tuple.setdefault(c.tuple, []).append(c.curve_order)
        for t in enumerate_tuples(n, 6):
            expected = brute_orders_for_tuple(cfg.scheme, cfg.f, t, cfg.T_max)
            got = sorted(by_tuple.get(t, []))
            assert got == expected, (t, got, expected)


class TestConfig:
    def test_round_trip(self):
        cfg = SearchConfig(n=3, N_max=5, T_max=6, precision=192,
                           skip_vanishing_subsums=True)
        again = SearchConfig.from_json_dict(cfg.to_json_dict())
        assert again.digest() == cfg.digest()

    def test_invalid_bounds_rejected(self):
        with pytest.raises(ValueError):
            SearchConfig(n=0)
        with pytest.raises(ValueError):
            SearchConfig(T_max=1)
        with pytest.raises(ValueError):
            SearchConfig(f=RationalFunction.constant(1))
