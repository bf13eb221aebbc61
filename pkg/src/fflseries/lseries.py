"""Pellarin L-series L(χ_t^β, s) on S_∞ = C_∞^* × Z_p.

For s = (x, y) and monic a, a^s = x^{deg a}·⟨a⟩^y, so

    L(χ_t^β, s) = Σ_e x^{-e} · S_e,   S_e = Σ_{a ∈ A_+(e)} χ_t(a)^β ⟨a⟩^{-y}.

The per-degree sums S_e satisfy

    v(S_e) ≥ (q-1)e(e+1)/2 - eβδ_t,   δ_t = max(1 - v(t), 1),

which is the valuation floor of the α-shifted coefficients c_e = S_e/α^{eβ}
for α = θ^{δ_t}.  The evaluation cutoff is the last e for which
-e·v(x) + (q-1)e(e+1)/2 - eβδ_t < N; this is checked against brute force in
the test suite rather than trusted.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .charsum import LinearSumInstance, ScaleMap, identity
from .errors import DivergenceError, HypothesisError
from .rings import (
    LaurentSeries,
    ThetaPoly,
    ThetaTPoly,
    bracket,
    monic_blocks,
    monic_from_index,
    one_unit_pow,
    prime_enumerate,
)
from .scalars import DEFAULT_CAP, FieldElem, PadicInt

log = logging.getLogger(__name__)

INF = math.inf


# -- t and s ------------------------------------------------------------------


def coerce_t(field, t):
    """t as a FieldElem (t in E) or a LaurentSeries."""
    if isinstance(t, (int, np.integer)):
        return FieldElem(field, field.from_int(int(t)))
    if isinstance(t, ThetaPoly):
        return LaurentSeries.from_poly(t)
    if isinstance(t, (FieldElem, LaurentSeries)):
        return t
    raise TypeError(f"unsupported t of type {type(t).__name__}")


def t_valuation(t):
    if isinstance(t, FieldElem):
        return INF if t.code == 0 else 0
    return t.valuation()


def delta_t(t):
    return int(max(1 - t_valuation(t), 1))


def t_descriptor(t):
    if isinstance(t, FieldElem):
        return t.field.render(t.code)
    return str(t)


@dataclass(frozen=True)
class SPoint:
    """A point s = (x, y) of S_∞."""

    x: LaurentSeries
    y: PadicInt

    def __post_init__(self):
        if self.x.is_zero():
            raise HypothesisError("x must be nonzero")

    @classmethod
    def from_integer(cls, field, j):
        """s_j = (θ^j, j), so that a^{s_j} = a^j."""
        return cls(LaurentSeries.theta(field, j), PadicInt.exact(field.p, j))


@dataclass
class LSeriesJob:
    field: object
    beta: int
    t: object
    s: SPoint
    N: int
    alpha: LaurentSeries = None

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")
        self.t = coerce_t(self.field, self.t)
        if self.alpha is not None:
            check_alpha(self.alpha, self.t)

    @property
    def delta_t(self):
        return delta_t(self.t)

    @property
    def lambda_t(self):
        """λ_t = max(1, |t|) as a power of q (|θ| = q)."""
        return self.field.q ** int(max(0, -t_valuation(self.t)))

    def default_alpha(self):
        return LaurentSeries.theta(self.field, self.delta_t)


def check_alpha(alpha, t):
    d = delta_t(t)
    if alpha.is_zero() or -alpha.valuation() < d:
        raise HypothesisError(
            f"alpha too small: need -v(alpha) >= delta_t = {d}, so that v(t^i/alpha^d) >= d - i"
        )


# -- power sums ----------------------------------------------------------------

_UNIT_CACHE = {}
_UNIT_CACHE_MAX = 64


def _unit_powers(field, e, y, N, cap):
    """Matrix of ⟨a⟩^{-y} mod θ^{-N} over A_+(e): row = monic index."""
    key = (field.spec, e, y.descriptor())
    hit = _UNIT_CACHE.get(key)
    if hit is not None and hit.shape[1] >= N:
        return hit[:, :N]
    size = field.q**e
    if size > cap:
        from .errors import CapExceededError

        raise CapExceededError(f"monic enumeration in degree {e}", size, cap)
    out = np.zeros((size, N), dtype=np.int64)
    neg = -y
    for i in range(size):
        u = one_unit_pow(bracket(monic_from_index(field, e, i)), neg, N)
        out[i] = u.window(0, N)
    if len(_UNIT_CACHE) >= _UNIT_CACHE_MAX:
        _UNIT_CACHE.pop(next(iter(_UNIT_CACHE)))
    _UNIT_CACHE[key] = out
    return out


def _chi_codes(field, e, t, beta, start, stop):
    """χ_t(a)^β for t in E, vectorized over monic indices [start, stop)."""
    idx = np.arange(start, stop, dtype=np.int64)
    q = field.q
    digits = []
    r = idx.copy()
    for _ in range(e):
        digits.append(r % q)
        r //= q
    val = np.ones(len(idx), dtype=np.int64)
    for i in range(e - 1, -1, -1):
        val = field.vadd(field.vscale(val, t.code), digits[i])
    out = np.ones(len(idx), dtype=np.int64)
    for _ in range(beta):
        out = field.vmul(out, val)
    return out


def _exact_sum(field, e, beta, j, t, start, stop):
    """Exact Σ χ_t(a)^β ⟨a⟩^j for j ≥ 0 via the outer-sum kernel."""
    acc = kernels.monic_outer_sum(field, e, beta, j, start, stop)
    s = ThetaTPoly(field, acc).evaluate_t(t)
    if isinstance(s, ThetaPoly):
        s = LaurentSeries.from_poly(s)
    return s.shift(e * j)


def _block_sum(field, e, beta, y, t, N, start, stop, cap):
    if y.is_exact and y.value <= 0 and (isinstance(t, FieldElem) or t.exact):
        return _exact_sum(field, e, beta, -y.value, t, start, stop)
    vt = t_valuation(t)
    low = beta * e * min(0, vt) if vt != INF else 0
    if N <= low:
        return LaurentSeries.zero(field, N)
    Nu = int(N - low)
    U = _unit_powers(field, e, y, Nu, cap)[start:stop]
    if isinstance(t, FieldElem):
        chi = _chi_codes(field, e, t, beta, start, stop)
        c = field.vsum(field.vmul(chi[:, None], U), axis=0)
        return LaurentSeries(field, c, 0, N)
    total = LaurentSeries.zero(field, N)
    for k, i in enumerate(range(start, stop)):
        chi = monic_from_index(field, e, i).evaluate_at(t).power(beta)
        total = total + chi * LaurentSeries(field, U[k], 0, Nu)
    return total.truncate(N)


def power_sum(field, e, beta, y, t, N, cap=DEFAULT_CAP, workers=1, cache=None):
    """S_e = Σ_{a ∈ A_+(e)} χ_t(a)^β ⟨a⟩^{-y}, modulo θ^{-N}.

    Exact (ignoring N) for exact y ≤ 0 and exact t.  ``workers`` > 1 splits
    the monic range into blocks summed on a thread pool.
    """
    y = PadicInt.coerce(field.p, y)
    t = coerce_t(field, t)
    if e == 0:
        return LaurentSeries.one(field)
    size = field.q**e
    if size > cap:
        from .errors import CapExceededError

        raise CapExceededError(f"monic enumeration in degree {e}", size, cap)
    key = None
    if cache is not None:
        key = power_sum_key(field, e, beta, y, t)
        hit = cache.get("power_sum", key, field, N)
        if hit is not None:
            return hit
    blocks = monic_blocks(field, e, workers) if workers > 1 else [(0, size)]
    if len(blocks) == 1:
        res = _block_sum(field, e, beta, y, t, N, 0, size, cap)
    else:
        # fill the shared unit cache once so threads only read it
        if not (y.is_exact and y.value <= 0):
            vt = t_valuation(t)
            low = beta * e * min(0, vt) if vt != INF else 0
            if N > low:
                _unit_powers(field, e, y, int(N - low), cap)
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda b: _block_sum(field, e, beta, y, t, N, b[0], b[1], cap), blocks))
        res = parts[0]
        for part in parts[1:]:
            res = res + part
    if cache is not None:
        cache.put("power_sum", key, res)
    return res


def power_sum_key(field, e, beta, y, t):
    return field.spec.to_dict() | {
        "beta": beta,
        "e": e,
        "y": y.descriptor(),
        "t": t_descriptor(t),
    }


# -- evaluation ----------------------------------------------------------------


def convergence_check(job):
    """(converges, margin) with margin = -v(x) - β·max(0, -v(t)).

    The series converges iff |x| > λ_t^β, i.e. margin > 0; every term of
    degree e then has valuation at least e·margin.
    """
    vt = t_valuation(job.t)
    margin = -job.s.x.valuation() - job.beta * max(0, -vt)
    return margin > 0, margin


def tail_floor(q, e, vx, beta, dt):
    """Lower bound for v(x^{-e} S_e)."""
    return -e * vx + (q - 1) * e * (e + 1) // 2 - e * beta * dt


def certified_cutoff(job):
    """Largest degree e* whose term may still be nonzero mod θ^{-N}."""
    q, vx, dt = job.field.q, job.s.x.valuation(), job.delta_t
    e = 0
    last = -1
    while True:
        b = tail_floor(q, e, vx, job.beta, dt)
        if b < job.N:
            last = e
        elif tail_floor(q, e + 1, vx, job.beta, dt) >= b:
            # the bound is convex in e, so it stays ≥ N from here on
            return last
        e += 1


def _x_inverse_power(job, e, need):
    x = job.s.x
    if x.exact and len(x.coeffs) == 1:
        return x.power(-e)
    return x.power(-e, prec=need)


def lseries_term(job, e, cap=DEFAULT_CAP, workers=1, cache=None):
    """x^{-e}·S_e modulo θ^{-N}."""
    f = job.field
    vx = job.s.x.valuation()
    vt = t_valuation(job.t)
    low = job.beta * e * min(0, vt) if vt != INF else 0
    Ne = int(job.N + e * vx)
    if Ne <= low:
        return LaurentSeries.zero(f, job.N)
    ps = power_sum(f, e, job.beta, job.s.y, job.t, Ne, cap, workers, cache)
    xi = _x_inverse_power(job, e, job.N - low)
    return (xi * ps).truncate(job.N)


def lseries_eval(job, cap=DEFAULT_CAP, workers=1, cache=None, extra_terms=0):
    """L(χ_t^β, s) modulo θ^{-N}, summed through the certified cutoff."""
    ok, margin = convergence_check(job)
    if not ok:
        raise DivergenceError(
            f"no convergence: need |x| > lambda_t^beta (valuation margin {margin} <= 0)"
        )
    emax = certified_cutoff(job) + extra_terms
    total = LaurentSeries.zero(job.field, job.N)
    for e in range(emax + 1):
        total = total + lseries_term(job, e, cap, workers, cache)
    return total


def direct_eval(job, emax, cap=DEFAULT_CAP):
    """Σ_{deg a ≤ emax} χ_t(a)^β a^{-s} with a^{-s} = x^{-deg a}·(⟨a⟩^y)^{-1}.

    Slow reference path: each a is raised to y and inverted on its own.
    """
    f = job.field
    total = LaurentSeries.zero(f, job.N)
    vt = t_valuation(job.t)
    for e in range(emax + 1):
        if f.q**e > cap:
            from .errors import CapExceededError

            raise CapExceededError(f"monic enumeration in degree {e}", f.q**e, cap)
        low = job.beta * e * min(0, vt) if vt != INF else 0
        prec = int(job.N + e * job.s.x.valuation() - low) + 1
        xi = _x_inverse_power(job, e, job.N - low)
        for i in range(f.q**e):
            a = monic_from_index(f, e, i)
            chi = a.evaluate_at(job.t)
            chi = LaurentSeries.coerce(f, chi).power(job.beta)
            u = one_unit_pow(bracket(a), job.s.y, max(prec, 1), method="binomial")
            total = total + (xi * chi * u.inverse(max(prec, 1))).truncate(job.N)
    return total


def rational_oracle(job, emax):
    """Σ χ_t(a)^β a^{-j} through exact polynomial powers and one inversion each (s = s_j)."""
    f = job.field
    j = int(job.s.y)
    total = LaurentSeries.zero(f, job.N)
    for e in range(emax + 1):
        for i in range(f.q**e):
            a = monic_from_index(f, e, i)
            chi = LaurentSeries.coerce(f, a.evaluate_at(job.t)).power(job.beta)
            aj = LaurentSeries.from_poly(a**j) if j >= 0 else LaurentSeries.from_poly(a ** (-j))
            term = chi.divide(aj, job.N) if j >= 0 else chi * aj
            total = total + term.truncate(job.N)
    return total


# -- Euler product ---------------------------------------------------------------


def _prime_weight(job, f, prec):
    """χ_t(f)^β ⟨f⟩^{-y} for a monic prime f."""
    chi = LaurentSeries.coerce(job.field, f.evaluate_at(job.t)).power(job.beta)
    u = one_unit_pow(bracket(f), -job.s.y, prec)
    return (chi * u).truncate(prec)


def euler_product_coeffs(job, D, cap=DEFAULT_CAP):
    """Coefficients of X^0..X^D in Π_{deg f ≤ D} (1 - w_f X^{deg f})^{-1}.

    w_f = χ_t(f)^β ⟨f⟩^{-y}; X stands for x^{-1}.  By unique factorization
    the coefficient of X^e equals S_e for e ≤ D.
    """
    f = job.field
    vt = t_valuation(job.t)
    low = job.beta * D * min(0, vt) if vt != INF else 0
    prec = int(job.N - low)
    # coefficient e stays known to prec - e·β·max(0, -v(t)) ≥ N throughout
    coeffs = [LaurentSeries.one(f)] + [LaurentSeries.zero(f, prec) for _ in range(D)]
    for P in prime_enumerate(f, D, cap):
        d = P.degree
        w = _prime_weight(job, P, prec)
        new = list(coeffs)
        # multiply by the geometric series Σ_k w^k X^{dk}
        wk = LaurentSeries.one(f)
        for k in range(1, D // d + 1):
            wk = (wk * w).truncate(prec)
            for e in range(d * k, D + 1):
                new[e] = new[e] + wk * coeffs[e - d * k]
        coeffs = new
    return [c.truncate(job.N) for c in coeffs]


def euler_product_eval(job, dmax, cap=DEFAULT_CAP):
    """Π over monic primes of degree ≤ dmax of (1 - χ_t(f)^β f^{-s})^{-1}."""
    ok, margin = convergence_check(job)
    if not ok:
        raise DivergenceError(
            f"no convergence: need |x| > lambda_t^beta (valuation margin {margin} <= 0)"
        )
    f = job.field
    N = job.N
    vt = t_valuation(job.t)
    total = LaurentSeries.one(f).truncate(N)
    if dmax <= 0:
        return LaurentSeries.one(f)
    for P in prime_enumerate(f, dmax, cap):
        d = P.degree
        low = job.beta * d * min(0, vt) if vt != INF else 0
        w = _prime_weight(job, P, int(N - low))
        term = _x_inverse_power(job, d, N - low) * w
        total = (total * (1 - term.truncate(N)).inverse(N)).truncate(N)
    return total


# -- α-shifted continuation ----------------------------------------------------


def continuation_coeff(field, beta, y, t, j, N, alpha=None, cap=DEFAULT_CAP, workers=1, cache=None):
    """The single coefficient c_j modulo θ^{-N}.

    The α^{-jβ} shift lowers the precision needed from the power sum by
    jβ·(-v(α)), so c_j alone can be certified deeper than a shared N allows.
    """
    t = coerce_t(field, t)
    y = PadicInt.coerce(field.p, y)
    if alpha is None:
        alpha = LaurentSeries.theta(field, delta_t(t))
    check_alpha(alpha, t)
    vt = t_valuation(t)
    low = beta * j * min(0, vt) if vt != INF else 0
    Nps = int(N + j * beta * alpha.valuation())
    ps = power_sum(field, j, beta, y, t, Nps, cap, workers, cache) if Nps > low or j == 0 else LaurentSeries.zero(field, Nps)
    if alpha.exact and len(alpha.coeffs) == 1:
        ai = alpha.power(-j * beta)
    else:
        ai = alpha.power(-j * beta, prec=N - low)
    return (ai * ps).truncate(N)


def continuation_coeffs(field, beta, y, t, jmax, N, alpha=None, cap=DEFAULT_CAP, workers=1, cache=None):
    """c_j = Σ_{a ∈ A_+(j)} (χ_t(a)/α^j)^β ⟨a⟩^{-y} for j = 0..jmax.

    ``N`` is one precision for all j, or a callable j -> precision.
    """
    prec = N if callable(N) else (lambda j: N)
    return [continuation_coeff(field, beta, y, t, j, prec(j), alpha, cap, workers, cache) for j in range(jmax + 1)]


def valuation_floor(q, j):
    """(q-1)j(j+1)/2."""
    return (q - 1) * j * (j + 1) // 2


def l2_map(w, t, alpha, j, prec=None):
    """Σ_n c_n θ^{-n} ↦ Σ_n c_n t^{j-n} / α^j for w of degree ≤ j in 1/θ."""
    f = w.field
    if not w.exact:
        raise HypothesisError("l2_map needs an exact polynomial in 1/θ")
    if w.is_exact_zero():
        return LaurentSeries.zero(f)
    if w.val < 0 or w.end - 1 > j:
        raise HypothesisError(f"l2_map: w must be a polynomial in 1/θ of degree <= {j}")
    t = LaurentSeries.coerce(f, coerce_t(f, t))
    acc = LaurentSeries.zero(f)
    tp = LaurentSeries.one(f)
    for n in range(j, -1, -1):
        c = w.coeff(n)
        if c:
            acc = acc + tp.scale(FieldElem(f, int(c)))
        if n:
            tp = tp * t
    if alpha.exact and len(alpha.coeffs) == 1:
        return acc * alpha.power(-j)
    return acc.divide(alpha.power(j), prec)


def continuation_instance(field, j, t, alpha, exponents=(1, 1)):
    """Character-sum instance behind the c_j floor.

    W = span{θ^{-1}, ..., θ^{-j}}, L_1 = identity, L_2 = l2_map.  Its
    (q-1)Q floor is (q-1)j(j+1)/2.
    """
    basis = [LaurentSeries.monomial(field, n) for n in range(1, j + 1)]
    maps = [identity, lambda w: l2_map(w, t, alpha, j)]
    return LinearSumInstance(field, basis, maps, list(exponents), label=f"continuation j={j}")


# -- Newton polygons ------------------------------------------------------------


def newton_polygon(points):
    """Lower convex hull of (j, v) as [(slope, length)], slopes nondecreasing.

    Points with v None or inf (coefficient zero to precision) are skipped
    with a warning.
    """
    pts = []
    for j, v in points:
        if v is None or v == INF:
            log.warning("newton_polygon: skipping j=%s (zero to precision)", j)
            continue
        pts.append((int(j), Fraction(v)))
    if not pts:
        raise HypothesisError("all coefficients are zero to precision")
    pts.sort()
    if pts[0][0] != 0:
        raise HypothesisError("the constant coefficient c_0 must be nonzero")
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the chord hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return [(Fraction(y2 - y1) / (x2 - x1), x2 - x1) for (x1, y1), (x2, y2) in zip(hull, hull[1:])]


def coefficient_valuations(coeffs):
    """[(j, v)] with v None for coefficients zero to precision."""
    out = []
    for j, c in enumerate(coeffs):
        out.append((j, None if c.is_zero() else c.valuation()))
    return out
