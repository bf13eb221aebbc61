from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fld
from fflseries import LaurentSeries, LSeriesJob, PadicInt, SPoint, ThetaPoly, lseries_eval, power_sum
from fflseries.errors import DivergenceError, HypothesisError
from fflseries.lseries import (
    certified_cutoff,
    coefficient_valuations,
    continuation_coeff,
    continuation_coeffs,
    convergence_check,
    delta_t,
    direct_eval,
    euler_product_coeffs,
    euler_product_eval,
    l2_map,
    lseries_term,
    newton_polygon,
    rational_oracle,
    t_valuation,
    tail_floor,
    valuation_floor,
)
from fflseries.rings import monic_enumerate
from fflseries.scalars import FieldElem
from fflseries.special import special_poly

LS = LaurentSeries


def job(f, beta, t, x, y, N):
    return LSeriesJob(f, beta, t, SPoint(LS.coerce(f, x), PadicInt.exact(f.p, y) if isinstance(y, int) else y), N)


def test_delta_and_lambda():
    f = fld(3)
    j = job(f, 1, LS.theta(f, 2), LS.theta(f, 5), 1, 10)
    assert j.delta_t == 3 and j.lambda_t == 9
    j = job(f, 1, FieldElem(f, 0), LS.theta(f, 1), 1, 10)
    assert j.delta_t == 1 and j.lambda_t == 1


def test_from_integer():
    f = fld(2)
    s = SPoint.from_integer(f, 3)
    assert s.x == LS.theta(f, 3) and s.y.value == 3


# -- power sums ---------------------------------------------------------------


def test_power_sum_degree_zero():
    f = fld(3)
    assert power_sum(f, 0, 2, PadicInt.exact(3, 5), FieldElem(f, 1), 10) == LS.one(f)


def test_power_sum_q2_degree_one():
    f = fld(2)
    assert power_sum(f, 1, 1, 0, FieldElem(f, 1), 10) == LS.one(f)


@pytest.mark.parametrize("t", [0, 1, 2])
def test_power_sum_q3_degree_one_vanishes(t):
    f = fld(3)
    assert power_sum(f, 1, 1, 0, FieldElem(f, t), 10).is_exact_zero()


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("y", [1, -1, 3, 7])
@pytest.mark.parametrize("t", ["const", "series"])
def test_power_sum_matches_enumeration(q, y, t):
    from fflseries.rings import bracket, one_unit_pow

    f = fld(q)
    tv = FieldElem(f, q - 1) if t == "const" else LS(f, [1, 1], -1)
    e, beta, N = 2, 2, 12
    got = power_sum(f, e, beta, y, tv, N)
    want = LS.zero(f, N)
    for a in monic_enumerate(f, e):
        chi = LS.coerce(f, a.evaluate_at(tv)).power(beta)
        u = one_unit_pow(bracket(a), PadicInt.exact(f.p, -y), N + 2 * beta * e, method="binomial")
        want = want + (chi * u).truncate(N)
    assert got.agreement(want) >= N


def test_parallel_power_sum_matches_serial():
    f = fld(3)
    for y in (0, -2, 5):
        a = power_sum(f, 4, 1, y, FieldElem(f, 2), 15)
        b = power_sum(f, 4, 1, y, FieldElem(f, 2), 15, workers=3)
        assert a == b


# -- convergence ---------------------------------------------------------------


def test_convergence_examples():
    f = fld(3)
    assert convergence_check(job(f, 5, FieldElem(f, 1), LS.theta(f, 1), 1, 5))[0]
    assert not convergence_check(job(f, 1, LS.theta(f, 1), LS.theta(f, 1), 1, 5))[0]
    assert convergence_check(job(f, 1, LS.theta(f, 1), LS.theta(f, 2), 1, 5))[0]


def test_divergent_point_raises():
    f = fld(2)
    with pytest.raises(DivergenceError):
        lseries_eval(job(f, 1, LS.theta(f, 1), LS.theta(f, 1), 1, 8))


JOBS = [
    (2, 1, "1", 1, 1),
    (2, 1, "0", 1, 2),
    (2, 2, "theta^-1", 2, -1),
    (3, 1, "1", 1, 1),
    (3, 0, "1", 2, 2),
    (3, 1, "theta", 2, 1),
    (3, 2, "1+theta^-1", 1, 5),
    (4, 1, "g", 1, 1),
    (2, 1, "theta^2", 3, 1),
    (5, 1, "2", 1, -3),
]


def _job_from(q, beta, t, xpow, y, N):
    from fflseries.serialize import parse_laurent

    f = fld(q)
    tv = parse_laurent(f, t)
    x = LS.theta(f, xpow + beta * max(0, -t_valuation(tv)))
    return job(f, beta, tv, x, y, N)


@pytest.mark.parametrize("q,beta,t,xpow,y", JOBS)
def test_tail_floor_against_brute_force(q, beta, t, xpow, y):
    """The tail floor must lower-bound every term, including those past the cutoff."""
    j0 = _job_from(q, beta, t, xpow, y, 14)
    estar = certified_cutoff(j0)
    vx = j0.s.x.valuation()
    floors = [tail_floor(q, e, vx, beta, j0.delta_t) for e in range(estar + 4)]
    jb = _job_from(q, beta, t, xpow, y, max(floors) + 2)
    for e in range(estar + 4):
        if q**e > 10**5:
            break
        term = lseries_term(jb, e)
        if not term.is_zero():
            assert term.valuation() >= floors[e], (e, term.valuation(), floors[e])
        else:
            assert term.prec >= floors[e]
    assert all(floors[e] >= j0.N for e in range(estar + 1, estar + 4))


@pytest.mark.parametrize("q,beta,t,xpow,y", JOBS[:8])
def test_certified_value_is_stable(q, beta, t, xpow, y):
    j0 = _job_from(q, beta, t, xpow, y, 16)
    assert lseries_eval(j0).agreement(lseries_eval(j0, extra_terms=2)) >= 16


@pytest.mark.parametrize("q,beta,t,xpow,y", [j for j in JOBS if j[0] <= 3][:6])
def test_lseries_matches_slow_direct_path(q, beta, t, xpow, y):
    j0 = _job_from(q, beta, t, xpow, y, 12)
    assert lseries_eval(j0).agreement(direct_eval(j0, certified_cutoff(j0))) >= 12


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("jj", [1, 2, 3])
@pytest.mark.parametrize("beta", [0, 1])
def test_specialization_at_integer_points(q, jj, beta):
    f = fld(q)
    for t in (FieldElem(f, 1), LS.monomial(f, 1)):
        jb = LSeriesJob(f, beta, t, SPoint.from_integer(f, jj), 15)
        assert lseries_eval(jb).agreement(rational_oracle(jb, certified_cutoff(jb))) >= 15


def test_zeta_partial_sums():
    f = fld(2)
    jb = LSeriesJob(f, 0, FieldElem(f, 1), SPoint.from_integer(f, 1), 12)
    z = lseries_eval(jb)
    assert z.valuation() == 0 and z.coeff(0) == 1
    want = LS.zero(f, 12)
    for e in range(certified_cutoff(jb) + 1):
        for a in monic_enumerate(f, e):
            want = want + LS.one(f).divide(LS.from_poly(a), 12)
    assert z.agreement(want) >= 12


def test_t_zero_only_constant_term_monics_contribute():
    f = fld(2)
    jb = LSeriesJob(f, 1, FieldElem(f, 0), SPoint.from_integer(f, 1), 12)
    want = LS.zero(f, 12)
    for e in range(certified_cutoff(jb) + 1):
        for a in monic_enumerate(f, e):
            if a.coeff(0):
                want = want + LS.one(f).divide(LS.from_poly(a), 12)
    assert lseries_eval(jb).agreement(want) >= 12


# -- Euler product -------------------------------------------------------------


def test_euler_empty_product():
    f = fld(3)
    assert euler_product_eval(job(f, 1, FieldElem(f, 1), LS.theta(f, 2), 0, 10), 0) == LS.one(f)


def test_euler_two_linear_primes():
    f = fld(2)
    jb = job(f, 0, FieldElem(f, 1), LS.theta(f, 2), 0, 20)
    want = LS(f, [1, 0, 1]).power(-2, 20)
    assert euler_product_eval(jb, 1).agreement(want) >= 20


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("beta,t,y", [(1, "1", 1), (2, "theta^-1", -2), (1, "theta", 3), (0, "1", 2)])
def test_euler_coefficients_equal_power_sums(q, beta, t, y):
    from fflseries.serialize import parse_laurent

    f = fld(q)
    tv = parse_laurent(f, t)
    jb = job(f, beta, tv, LS.theta(f, 3), y, 12)
    D = 4 if q == 2 else 3
    cs = euler_product_coeffs(jb, D)
    for e in range(D + 1):
        assert cs[e].agreement(power_sum(f, e, beta, y, tv, 12)) >= 12


# -- continuation ----------------------------------------------------------------


def test_c0_is_one():
    f = fld(3)
    for y in (1, -1, 4):
        assert continuation_coeffs(f, 1, y, FieldElem(f, 2), 0, 10)[0].agreement(LS.one(f)) >= 10


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("y", [1, -1, 2])
def test_valuation_floor_for_constant_t(q, y):
    f = fld(q)
    for t in range(q):
        cs = continuation_coeffs(f, 1, y, FieldElem(f, t), 5, lambda j: valuation_floor(q, j) + 1, LS.theta(f, 1))
        for j, c in enumerate(cs):
            assert c.is_zero() or c.valuation() >= valuation_floor(q, j)
            assert c.cap > valuation_floor(q, j)


@pytest.mark.parametrize("q,beta,j0", [(2, 1, 1), (3, 1, 2), (3, 2, 3)])
def test_continuation_matches_special_poly(q, beta, j0):
    """At y = -j0 and α = θ, c_e = θ^{-e(β+j0)}·z_e with z_e the x^{-e} coefficient at t."""
    f = fld(q)
    t = FieldElem(f, 1)
    zp = special_poly(f, beta, j0)
    cs = continuation_coeffs(f, beta, -j0, t, zp.bound, 30, LS.theta(f, 1))
    for e, c in enumerate(cs):
        ze = LS.coerce(f, zp.coeff(e).evaluate_t(t))
        assert c.agreement(ze.shift(e * beta + e * j0)) >= 30


def test_alpha_too_small_rejected():
    f = fld(2)
    with pytest.raises(HypothesisError):
        continuation_coeffs(f, 1, 1, LS.theta(f, 1), 2, 10, LS.theta(f, 1))


def test_single_coefficient_matches_list():
    f = fld(3)
    cs = continuation_coeffs(f, 1, 2, FieldElem(f, 1), 3, 12)
    assert continuation_coeff(f, 1, 2, FieldElem(f, 1), 3, 12) == cs[3]


def test_l2_map_examples():
    f = fld(3)
    t, a, j = LS(f, [1, 1]), LS.theta(f, 1), 3
    assert l2_map(LS.one(f), t, a, j, 20).agreement(t.power(j) * a.power(-j)) >= 20
    assert l2_map(LS.monomial(f, j), t, a, j, 20) == a.power(-j)
    with pytest.raises(HypothesisError):
        l2_map(LS.monomial(f, j + 1), t, a, j)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=4, max_size=4), st.lists(st.integers(0, 2), min_size=4, max_size=4), st.integers(0, 2))
def test_l2_map_is_linear(u, v, c):
    f = fld(3)
    t, a = FieldElem(f, 2), LS.theta(f, 1)
    U, V = LS(f, u), LS(f, v)
    assert l2_map(U + V, t, a, 3) == l2_map(U, t, a, 3) + l2_map(V, t, a, 3)
    assert l2_map(U * c, t, a, 3) == l2_map(U, t, a, 3) * c


# -- Newton polygons -------------------------------------------------------------


def test_newton_examples():
    assert newton_polygon([(0, 0), (1, 1), (2, 3)]) == [(Fraction(1), 1), (Fraction(2), 1)]
    assert newton_polygon([(0, 0), (1, 5), (2, 3)]) == [(Fraction(3, 2), 2)]


def test_newton_errors_and_skips(caplog):
    with pytest.raises(HypothesisError):
        newton_polygon([(0, None), (1, None)])
    segs = newton_polygon([(0, 0), (1, None), (2, 4)])
    assert segs == [(Fraction(2), 2)]
    assert "skipping j=1" in caplog.text


@pytest.mark.parametrize("q,y", [(2, PadicInt.truncated(2, [1, 0, 1, 1, 0, 1, 1, 1])), (3, PadicInt.truncated(3, [2, 1, 0, 2, 1]))])
def test_slopes_increase_for_generic_y(q, y):
    f = fld(q)
    cs = continuation_coeffs(f, 1, y, FieldElem(f, 1), 4, lambda j: valuation_floor(q, j) + 6)
    segs = newton_polygon(coefficient_valuations(cs))
    slopes = [s for s, _ in segs]
    assert slopes == sorted(slopes) and len(set(slopes)) == len(slopes)


# -- continuity ------------------------------------------------------------------


@pytest.mark.parametrize("q", [2, 3])
def test_y_continuity(q):
    f = fld(q)
    p = f.p
    t = FieldElem(f, 1)
    y = 5
    agree = []
    for M in range(1, 4):
        a = power_sum(f, 3, 1, y, t, 40)
        b = power_sum(f, 3, 1, y + p**M, t, 40)
        agree.append(a.agreement(b))
        assert agree[-1] >= p**M
    assert agree == sorted(agree)


def test_t_continuity():
    f = fld(3)
    base = LS(f, [1, 1])
    ref = lseries_eval(LSeriesJob(f, 1, base, SPoint.from_integer(f, 1), 25))
    agree = []
    for M in range(2, 7):
        tm = base + LS.monomial(f, M)
        agree.append(ref.agreement(lseries_eval(LSeriesJob(f, 1, tm, SPoint.from_integer(f, 1), 25))))
    assert agree == sorted(agree) and agree[-1] > agree[0]


def test_delta_t_values():
    f = fld(2)
    assert delta_t(FieldElem(f, 0)) == 1
    assert delta_t(LS.theta(f, 2)) == 3
    assert delta_t(ThetaPoly.theta(f).evaluate_at(LS.monomial(f, 1))) == 1
