"""Carlitz period and Anderson–Thakur products without the root θ₁.

With θ₁^{q-1} = -θ,

    π̃ = θ₁ θ Π_{i≥1} (1 - θ^{1-q^i})^{-1},
    Ω(t) = θ₁^{-q} Π_{i≥1} (1 - t θ^{-q^i}).

Their product only involves θ₁^{1-q} = (-θ)^{-1}, so

    π̃Ω(t) = -Π_{i≥1} (1 - t θ^{-q^i}) / (1 - θ^{1-q^i}),

and at t = θ each numerator cancels its denominator, giving π̃Ω(θ) = -1
exactly.  Likewise π̃^{q-1} = θ₁^{q-1} θ^{q-1} Π(...)^{-(q-1)}
= -θ^q Π_{i≥1} (1 - θ^{1-q^i})^{-(q-1)}, which lies in K = F_q((1/θ)).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import HypothesisError
from .linalg import solve
from .lseries import LSeriesJob, SPoint, coerce_t, lseries_eval, t_valuation
from .rings import LaurentSeries, ThetaPoly
from .scalars import DEFAULT_CAP, FieldElem

INF = math.inf


def _factor_count(q, N, vt=INF):
    """Least I such that every factor i > I is 1 mod θ^{-N}."""
    i = 1
    while q**i - 1 < N or (vt != INF and q**i + vt < N):
        i += 1
    return i - 1


def pi_omega(field, t, N):
    """π̃Ω(t) modulo θ^{-N}; exact -1 when t = θ."""
    t = LaurentSeries.coerce(field, coerce_t(field, t))
    q = field.q
    vt = t_valuation(t)
    if vt != INF and vt <= -q:
        raise HypothesisError(f"the product in t diverges for v(t) = {vt} <= -q")
    theta = LaurentSeries.theta(field)
    if t == theta:
        return LaurentSeries(field, [field.neg(1)])
    I = _factor_count(q, N, vt)
    num = LaurentSeries.one(field)
    den = LaurentSeries.one(field)
    for i in range(1, I + 1):
        qi = q**i
        n_i = (1 - t * LaurentSeries.monomial(field, qi)).truncate(N)
        d_i = 1 - LaurentSeries.monomial(field, qi - 1)
        if n_i == d_i:
            continue
        num = (num * n_i).truncate(N)
        den = (den * d_i).truncate(N)
    return -(num * den.inverse(N)).truncate(N)


def pi_pow_qm1(field, N):
    """π̃^{q-1} = -θ^q Π (1 - θ^{1-q^i})^{-(q-1)} modulo θ^{-N}."""
    q = field.q
    rel = N + q
    I = _factor_count(q, rel)
    den = LaurentSeries.one(field)
    for i in range(1, I + 1):
        den = (den * (1 - LaurentSeries.monomial(field, q**i - 1))).truncate(rel)
    prod = den.inverse(rel).power(q - 1, rel)
    return -(prod * LaurentSeries.theta(field, q)).truncate(N)


def pi_power(field, j, N):
    """π̃^j for (q-1) | j, as an integer power of π̃^{q-1}."""
    q = field.q
    if j % (q - 1):
        raise HypothesisError(f"π̃^{j} is not in K unless (q-1) | j")
    k = j // (q - 1)
    if k == 0:
        return LaurentSeries.one(field)
    # π̃^{q-1} mod θ^{-P} has relative precision P + q; its k-th power has
    # valuation -qk, hence absolute precision P + q - qk.
    P = N + q * (k - 1)
    return pi_pow_qm1(field, P).power(k, N)


def zeta_value(field, j, N, cap=DEFAULT_CAP, workers=1, cache=None):
    """ζ_A(j) = Σ_{a monic} a^{-j} modulo θ^{-N}."""
    if j < 1:
        raise HypothesisError("zeta_value needs j >= 1")
    job = LSeriesJob(field, 0, 0, SPoint.from_integer(field, j), N)
    z = lseries_eval(job, cap, workers, cache)
    if z.is_zero():
        raise HypothesisError(f"zeta value vanished to precision {N}")
    return z


def carlitz_ratio(field, N, cap=DEFAULT_CAP):
    """ζ_A(q-1)/π̃^{q-1} modulo θ^{-N}."""
    q = field.q
    z = zeta_value(field, q - 1, N, cap)
    pi = pi_pow_qm1(field, N - q)
    return z.divide(pi, N)


def rational_reconstruct(f, d_num, d_den):
    """(u, v) with v monic, deg u ≤ d_num, deg v ≤ d_den and f·v ≡ u.

    Tries deg v = 0, 1, ... and solves the linear conditions that f·v has no
    terms θ^{-k}, k ≥ 1, below the precision and no terms θ^m, m > d_num.
    The answer is checked by re-expanding u/v; returns None on failure.
    """
    field = f.field
    N = int(f.cap) if f.cap != INF else f.end + d_den + d_num + 2
    lo = min(f.val, 0) if not f.is_zero() else 0
    for D in range(d_den + 1):
        ks = list(range(1, N - D))
        ks += [-m for m in range(d_num + 1, D - lo + 1)]
        if len(ks) < D + 2:
            continue
        # coefficient of θ^{-k} in f·v is Σ_i v_i f_{k+i} + f_{k+D}
        rows, rhs = [], []
        for k in ks:
            rows.append([f.coeff(k + i) if k + i < N else 0 for i in range(D)])
            rhs.append(field.neg(f.coeff(k + D)))
        a = np.array(rows, dtype=np.int64).reshape(len(ks), D)
        x = solve(field, a, np.array(rhs, dtype=np.int64))
        if x is None:
            continue
        v = ThetaPoly(field, list(x) + [1])
        fv = f * LaurentSeries.from_poly(v)
        ucoef = [fv.coeff(-m) for m in range(0, max(0, -fv.val) + 1)] if not fv.is_zero() else []
        u = ThetaPoly(field, ucoef)
        if u.degree > d_num:
            continue
        back = LaurentSeries.from_poly(u).divide(LaurentSeries.from_poly(v), N)
        if back.agreement(f) >= N:
            return u, v
    return None


def pellarin_identity_check(field, t, N, cap=DEFAULT_CAP, workers=1, cache=None):
    """Compare L(χ_t, 1) with -π̃Ω(t) (the j = 1 case, b_1 = -1)."""
    t = coerce_t(field, t)
    job = LSeriesJob(field, 1, t, SPoint.from_integer(field, 1), N)
    lhs = lseries_eval(job, cap, workers, cache)
    rhs = -pi_omega(field, t, N)
    agree = lhs.agreement(rhs)
    return {"lhs": lhs, "rhs": rhs, "agree_to": agree, "ok": agree >= N}


def bj_ratio(field, t, j, N, cap=DEFAULT_CAP):
    """L(χ_t, j)/(π̃^j Ω(t)) for (q-1) | (j-1); exploratory, nothing asserted."""
    q = field.q
    if (j - 1) % (q - 1):
        raise HypothesisError("needs j ≡ 1 mod (q-1)")
    job = LSeriesJob(field, 1, t, SPoint.from_integer(field, j), N)
    L = lseries_eval(job, cap)
    k = (j - 1) // (q - 1)
    extra = q * k
    den = pi_omega(field, t, N + extra)
    if k:
        den = den * pi_pow_qm1(field, N + extra).power(k, N + extra)
    return L.divide(den, N)


def default_t_grid(field):
    """t ∈ {0} ∪ F_q ∪ {θ^{-1}, 1 + θ^{-1}}."""
    grid = [FieldElem(field, c) for c in range(field.q)]
    grid.append(LaurentSeries.monomial(field, 1))
    grid.append(LaurentSeries(field, [1, 1]))
    return grid
