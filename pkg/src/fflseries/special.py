"""Special polynomials z(χ_t^β, x, -j) = Σ_e x^{-e} Σ_{a ∈ A_+(e)} χ_t(a)^β a^j.

The inner sums vanish for e > (β+j)/(q-1), so z is a polynomial in x^{-1}
with coefficients in A[t].  Substituting x -> x·θ^{-j} relates z to the
L-series at y = -j:  z(x) = L(χ_t^β, (x θ^{-j}, -j)).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CapExceededError, HypothesisError, InconsistencyError
from .lseries import LSeriesJob, SPoint, coerce_t, lseries_eval
from .rings import LaurentSeries, ThetaPoly, ThetaTPoly, monic_blocks
from .scalars import DEFAULT_CAP, FieldElem, PadicInt


def degree_bound(q, beta, j):
    return (beta + j) // (q - 1)


@dataclass
class SpecialPolynomial:
    field: object
    beta: int
    j: int
    coeffs: list  # ThetaTPoly per power of x^{-1}

    @property
    def bound(self):
        return degree_bound(self.field.q, self.beta, self.j)

    def coeff(self, e):
        return self.coeffs[e] if e < len(self.coeffs) else ThetaTPoly.zero(self.field)

    def at_x_one(self):
        """Σ_e coeff_e, the value at x = 1 as an element of A[t]."""
        total = ThetaTPoly.zero(self.field)
        for c in self.coeffs:
            total = total + c
        return total

    def swap(self):
        return SpecialPolynomial(self.field, self.j, self.beta, [c.swap() for c in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, SpecialPolynomial):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return all(self.coeff(e) == other.coeff(e) for e in range(n))

    def __str__(self):
        terms = []
        for e, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            s = str(c)
            if e == 0:
                terms.append(s)
            else:
                xe = "x^{-1}" if e == 1 else f"x^{{-{e}}}"
                terms.append(xe if s == "1" else (f"({s})*{xe}" if "+" in s else f"{s}*{xe}"))
        return " + ".join(terms) if terms else "0"


def degree_sum(field, e, beta, j, workers=1, cap=DEFAULT_CAP):
    """Σ_{a ∈ A_+(e)} a(t)^β a(θ)^j as a ThetaTPoly."""
    size = field.q**e
    if size > cap:
        raise CapExceededError(f"monic enumeration in degree {e}", size, cap)
    if workers > 1 and size > 1:
        blocks = monic_blocks(field, e, workers)
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda b: kernels.monic_outer_sum(field, e, beta, j, *b), blocks))
        acc = parts[0]
        for part in parts[1:]:
            acc = field.vadd(acc, part)
    else:
        acc = kernels.monic_outer_sum(field, e, beta, j)
    return ThetaTPoly(field, acc)


def special_poly(field, beta, j, cap=DEFAULT_CAP, workers=1, extra=2):
    """z(χ_t^β, x, -j), computed through the degree bound plus ``extra`` degrees.

    The extra degrees must vanish; a nonzero one is an arithmetic bug.
    """
    if beta < 0 or j < 0:
        raise HypothesisError("beta and j must be nonnegative")
    E = degree_bound(field.q, beta, j)
    top = E + extra
    if field.q**top > cap:
        raise CapExceededError(f"monic enumeration in degree {top}", field.q**top, cap)
    coeffs = []
    for e in range(top + 1):
        c = degree_sum(field, e, beta, j, workers, cap)
        if e > E:
            if not c.is_zero():
                raise InconsistencyError(
                    f"coefficient of x^-{e} is nonzero beyond the degree bound {E} (q={field.q}, beta={beta}, j={j})"
                )
        else:
            coeffs.append(c)
    while len(coeffs) > 1 and coeffs[-1].is_zero():
        coeffs.pop()
    return SpecialPolynomial(field, beta, j, coeffs)


def special_eval(zp, x0, t0, prec=None):
    """Substitute x = x0, t = t0.

    x0 = None means x^{-1} = 0.  Scalar x0 and t0 give a ThetaPoly;
    Laurent-series arguments give a LaurentSeries (``prec`` is needed only
    when x0 is not an exact monomial).
    """
    f = zp.field
    t0 = coerce_t(f, t0)
    if x0 is None:
        c = zp.coeff(0).evaluate_t(t0)
        return c
    if isinstance(x0, (int, np.integer)):
        x0 = FieldElem(f, f.from_int(int(x0)))
    if isinstance(x0, FieldElem) and isinstance(t0, FieldElem):
        if x0.code == 0:
            raise HypothesisError("x0 must be nonzero")
        xi = FieldElem(f, f.inv(x0.code))
        total = ThetaPoly(f)
        xp = FieldElem(f, 1)
        for c in zp.coeffs:
            total = total + c.evaluate_t(t0) * xp
            xp = xp * xi
        return total
    x0 = LaurentSeries.coerce(f, x0)
    if x0.is_zero():
        raise HypothesisError("x0 must be nonzero")
    total = LaurentSeries.zero(f)
    for e, c in enumerate(zp.coeffs):
        v = LaurentSeries.coerce(f, c.evaluate_t(t0))
        if x0.exact and len(x0.coeffs) == 1:
            xe = x0.power(-e)
        else:
            if prec is None:
                raise HypothesisError("non-monomial x0 needs a precision")
            xe = x0.power(-e, prec=prec - min(0, v.valuation() if not v.is_zero() else 0))
        total = total + xe * v
    return total if prec is None else total.truncate(prec)


def check_trivial_zero_hypothesis(q, beta, lam):
    if not (lam > beta and (lam + beta) % (q - 1) == 0):
        raise HypothesisError(
            f"trivial zero needs lambda > beta and lambda ≡ -beta mod {q - 1}; got beta={beta}, lambda={lam}"
        )


def trivial_zero_check(field, beta, lam, cap=DEFAULT_CAP, workers=1):
    """Certify z(χ_t^β, 1, -λ) = 0 in A[t]; returns the (zero) value."""
    check_trivial_zero_hypothesis(field.q, beta, lam)
    zp = special_poly(field, beta, lam, cap, workers)
    val = zp.at_x_one()
    if not val.is_zero():
        raise InconsistencyError(f"z(chi_t^{beta}, 1, -{lam}) = {val} is not zero")
    return val


def vanishes_at_one(field, beta, lam, cap=DEFAULT_CAP):
    """Whether z(χ_t^β, 1, -λ) = 0, with no hypothesis (for experiments)."""
    return special_poly(field, beta, lam, cap).at_x_one().is_zero()


def symmetry_report(field, beta, j, cap=DEFAULT_CAP):
    """Compare z(β, j) with its θ↔t swap and with z(j, β).

    ``transposed`` (swap of z(β, j) equals z(j, β)) always holds;
    ``self_symmetric`` is an observation, not a claim.
    """
    z = special_poly(field, beta, j, cap)
    w = special_poly(field, j, beta, cap)
    return {
        "q": field.q,
        "beta": beta,
        "j": j,
        "self_symmetric": z.swap() == z,
        "transposed": z.swap() == w,
    }


def bridge_check(field, beta, j, x0, t0, N, cap=DEFAULT_CAP):
    """Agreement of z(χ_t^β, x0, -j) with L(χ_t^β, (x0·θ^{-j}, -j)) mod θ^{-N}."""
    zp = special_poly(field, beta, j, cap)
    x0 = LaurentSeries.coerce(field, x0)
    lhs = special_eval(zp, x0, t0, prec=N)
    s = SPoint(x0 * LaurentSeries.theta(field, -j), PadicInt.exact(field.p, -j))
    rhs = lseries_eval(LSeriesJob(field, beta, t0, s, N), cap)
    return lhs, rhs, rhs.agreement(lhs)


def bridge_points(field):
    """Ten matched points (β, j, x0, t0) inside the convergence region."""
    theta = LaurentSeries.theta
    t_vals = [FieldElem(field, 1), LaurentSeries.monomial(field, 1)]
    pts = []
    for k, (beta, j) in enumerate([(1, 1), (1, 2), (2, 1), (0, 2), (2, 3)]):
        t0 = t_vals[k % 2]
        pts.append((beta, j, theta(field, j + 1), t0))
        pts.append((beta, j, theta(field, j + 2) + LaurentSeries.one(field), t0))
    return pts
