"""Special-polynomial sums reduced modulo P^N for a monic prime P of A.

For a coprime to P of degree d, a^{q^d - 1} ≡ 1 mod P, hence
a^{(q^d-1)p^M} ≡ 1 mod P^{p^M}.  Power sums over a coprime to P at exponents
j and j + (q^d-1)p^M·m therefore agree modulo P^{min(p^M, N)}.

g(M) is the least congruence exponent over sampled members of the class of
j mod (q^d-1)p^M.  Samples lie in one fixed window, so the class at M+1 is
sampled by a subset of the class at M and g is nondecreasing; the check that
carries content is g(M) ≥ min(p^M, N).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CapExceededError, HypothesisError
from .rings import ThetaPoly, monic_from_index
from .scalars import DEFAULT_CAP


def is_irreducible(P):
    """Trial division by all monics of degree ≤ deg P / 2."""
    f = P.field
    d = P.degree
    if d < 1 or not P.is_monic():
        return False
    for k in range(1, d // 2 + 1):
        for i in range(f.q**k):
            if (P % monic_from_index(f, k, i)).is_zero():
                return False
    return True


@dataclass
class VadicContext:
    P: ThetaPoly
    N: int
    t_rep: ThetaPoly = None
    alpha_v: ThetaPoly = None

    def __post_init__(self):
        if not is_irreducible(self.P):
            raise HypothesisError(f"{self.P} is not a monic irreducible")
        if self.N < 1:
            raise ValueError("N must be >= 1")
        self.modulus = self.P**self.N
        if self.t_rep is None:
            self.t_rep = ThetaPoly.theta(self.P.field)
        self.t_rep = self.t_rep % self.modulus
        self._memo = {}

    @property
    def field(self):
        return self.P.field

    @property
    def d(self):
        return self.P.degree

    def vvaluation(self, a):
        """v_P(a), capped at N."""
        if a.is_zero():
            return self.N
        v = 0
        while v < self.N:
            quo, rem = divmod(a, self.P)
            if not rem.is_zero():
                break
            a, v = quo, v + 1
        return v


def _term(ctx, a, beta, j):
    M = ctx.modulus
    chi = a.evaluate_at(ctx.t_rep, modulus=M)
    return (chi.pow_mod(beta, M) * (a % M).pow_mod(j, M)) % M


def _residues(ctx, e, beta, restrict_coprime, cap):
    """[(χ_t(a)^β mod P^N, a mod P^N)] over A_+(e), memoized on the context."""
    key = (e, beta, restrict_coprime)
    hit = ctx._memo.get(key)
    if hit is not None:
        return hit
    f = ctx.field
    size = f.q**e
    if size > cap:
        raise CapExceededError(f"monic enumeration in degree {e}", size, cap)
    M = ctx.modulus
    out = []
    for i in range(size):
        a = monic_from_index(f, e, i)
        if restrict_coprime and e >= ctx.d and (a % ctx.P).is_zero():
            continue
        chi = a.evaluate_at(ctx.t_rep, modulus=M).pow_mod(beta, M)
        out.append((chi, a % M))
    ctx._memo[key] = out
    return out


def vadic_power_sum(ctx, e, beta, j, restrict_coprime=True, cap=DEFAULT_CAP):
    """Σ_{a ∈ A_+(e)} χ_{t}(a)^β a^j mod P^N, optionally over a coprime to P."""
    if j < 0:
        raise HypothesisError("j must be a nonnegative integer")
    M = ctx.modulus
    total = ThetaPoly(ctx.field)
    for chi, a in _residues(ctx, e, beta, restrict_coprime, cap):
        total = total + chi * a.pow_mod(j, M)
    return total % M


def omitted_terms(ctx, e, beta, j, cap=DEFAULT_CAP):
    """Sum of the terms with P | a, i.e. unrestricted minus restricted."""
    f = ctx.field
    total = ThetaPoly(f)
    if e < ctx.d:
        return total
    if f.q ** (e - ctx.d) > cap:
        raise CapExceededError(f"monic enumeration in degree {e - ctx.d}", f.q ** (e - ctx.d), cap)
    for i in range(f.q ** (e - ctx.d)):
        a = ctx.P * monic_from_index(f, e - ctx.d, i)
        total = total + _term(ctx, a, beta, j)
    return total % ctx.modulus


def congruence_exponent(ctx, x, y):
    """Largest N' ≤ N with x ≡ y mod P^{N'}."""
    return ctx.vvaluation((x - y) % ctx.modulus)


def vadic_continuity_check(ctx, e, beta, j, M_list, k=1, restrict_coprime=True, cap=DEFAULT_CAP):
    """Congruence exponents g(M) for the classes of j mod (q^d-1)p^M.

    Level M samples j' = j + (q^d-1)p^M·m for m = 1..k·p^(Mmax-M), so every
    level probes the same window of exponents.  k = 0 compares j with itself.
    """
    f = ctx.field
    p = f.p
    step0 = f.q**ctx.d - 1
    Mmax = max(M_list)
    base = vadic_power_sum(ctx, e, beta, j, restrict_coprime, cap)
    seen = {}
    rows = []
    for M in M_list:
        count = k * p ** (Mmax - M)
        jps = [j + step0 * p**M * m for m in range(1, count + 1)] if k else [j]
        exps = []
        for jp in jps:
            if jp not in seen:
                other = vadic_power_sum(ctx, e, beta, jp, restrict_coprime, cap)
                seen[jp] = congruence_exponent(ctx, base, other)
            exps.append(seen[jp])
        g = min(exps)
        rows.append({
            "M": M,
            "samples": len(jps),
            "j_prime_max": max(jps),
            "exponent": g,
            "floor": min(p**M, ctx.N),
        })
    gs = [r["exponent"] for r in rows]
    return {
        "kind": "vadic_continuity",
        "q": f.q,
        "P": str(ctx.P),
        "N": ctx.N,
        "e": e,
        "beta": beta,
        "j": j,
        "k": k,
        "restrict_coprime": restrict_coprime,
        "rows": rows,
        "nondecreasing": all(a <= b for a, b in zip(gs, gs[1:])),
        "meets_floor": all(r["exponent"] >= r["floor"] for r in rows) if restrict_coprime else None,
    }
