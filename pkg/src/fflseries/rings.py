"""A = F_q[θ], E[θ, t] and Laurent series in 1/θ with absolute precision.

Series use the valuation v(1/θ) = 1.  A :class:`LaurentSeries` stores the
coefficients of θ^{-val}, θ^{-(val+1)}, ... and is either *exact* (finitely
many terms, all known) or known modulo O(θ^{-prec}).
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from .errors import (
    CapExceededError,
    FieldMismatchError,
    FieldZeroDivisionError,
    HypothesisError,
    PrecisionError,
)
from .scalars import DEFAULT_CAP, FieldElem, PadicInt, lucas_binom

INF = math.inf
THETA = "θ"

_EMPTY = np.zeros(0, dtype=np.int64)


def _arr(x):
    return np.ascontiguousarray(np.asarray(x, dtype=np.int64))


def _trim(a):
    nz = np.flatnonzero(a)
    return a[: nz[-1] + 1] if len(nz) else _EMPTY


def _padd(f, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = a.copy()
    out[: len(b)] = f.vadd(out[: len(b)], b)
    return out


def _pdivmod(f, a, b):
    """Long division of coefficient vectors; b must be trimmed and nonzero."""
    db = len(b) - 1
    r = a.copy()
    if len(r) <= db:
        return _EMPTY, _trim(r)
    quo = np.zeros(len(r) - db, dtype=np.int64)
    linv = f.inv(int(b[-1]))
    for k in range(len(r) - 1, db - 1, -1):
        c = int(r[k])
        if c:
            c = f.mul(c, linv)
            quo[k - db] = c
            r[k - db : k + 1] = f.vsub(r[k - db : k + 1], f.vscale(b, c))
    return _trim(quo), _trim(r[:db])


def _same_field(a, b):
    if a is not b and a.spec != b.spec:
        raise FieldMismatchError("operands built over different FieldSpecs")


def _check_elem(field, c):
    if isinstance(c, FieldElem):
        _same_field(field, c.field)
        return c.code
    if isinstance(c, (int, np.integer)):
        return field.from_int(int(c))
    raise TypeError(f"cannot use {type(c).__name__} as a scalar")


def _fmt_coeff(field, code, mono):
    s = field.render(code)
    if not mono:
        return s
    if code == 1:
        return mono
    if "+" in s:
        return f"({s})*{mono}"
    return f"{s}*{mono}"


# -- A = F_q[θ] ---------------------------------------------------------------


class ThetaPoly:
    """Dense polynomial in θ over E (coefficients lowest degree first)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=()):
        self.field = field
        self.coeffs = _trim(_arr(coeffs))

    @classmethod
    def theta(cls, field):
        return cls(field, [0, 1])

    @classmethod
    def constant(cls, field, c):
        return cls(field, [_check_elem(field, c)])

    @property
    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return len(self.coeffs) == 0

    def is_monic(self):
        return len(self.coeffs) > 0 and self.coeffs[-1] == 1

    def over_fq(self):
        return bool(np.all(self.coeffs < self.field.q))

    def coeff(self, i):
        return int(self.coeffs[i]) if 0 <= i < len(self.coeffs) else 0

    def _other(self, other):
        if isinstance(other, ThetaPoly):
            _same_field(self.field, other.field)
            return other
        if isinstance(other, (FieldElem, int, np.integer)):
            return ThetaPoly.constant(self.field, other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return ThetaPoly(self.field, _padd(self.field, self.coeffs, o.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return ThetaPoly(self.field, self.field.vneg(self.coeffs))

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return NotImplemented
        o = self._other(other)
        if o is NotImplemented:
            return o
        return ThetaPoly(self.field, kernels.conv(self.coeffs, o.coeffs, -1, self.field))

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = ThetaPoly(self.field, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other):
        o = self._other(other)
        if o.is_zero():
            raise FieldZeroDivisionError("polynomial division by zero")
        qq, rr = _pdivmod(self.field, self.coeffs, o.coeffs)
        return ThetaPoly(self.field, qq), ThetaPoly(self.field, rr)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def pow_mod(self, e, modulus):
        result = ThetaPoly(self.field, [1]) % modulus
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            e >>= 1
            if e:
                base = (base * base) % modulus
        return result

    def __eq__(self, other):
        if isinstance(other, (int, FieldElem)):
            other = ThetaPoly.constant(self.field, other)
        if not isinstance(other, ThetaPoly):
            return NotImplemented
        return self.field.spec == other.field.spec and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.field.spec, self.coeffs.tobytes()))

    def __call__(self, x):
        return self.evaluate_at(x)

    def evaluate_at(self, x, modulus=None):
        """Horner evaluation θ -> x for x a FieldElem, LaurentSeries or ThetaPoly.

        With ``modulus`` (ThetaPoly x only) every step is reduced mod it.
        """
        f = self.field
        if isinstance(x, FieldElem):
            _same_field(f, x.field)
            acc = 0
            for c in self.coeffs[::-1]:
                acc = f.add(f.mul(acc, x.code), int(c))
            return FieldElem(f, acc, "E" if acc >= f.q or x.level == "E" else "q")
        if isinstance(x, (LaurentSeries, ThetaPoly)):
            _same_field(f, x.field)
            zero = LaurentSeries.zero(f) if isinstance(x, LaurentSeries) else ThetaPoly(f)
            acc = zero
            for c in self.coeffs[::-1]:
                acc = acc * x + FieldElem(f, int(c))
                if modulus is not None:
                    acc = acc % modulus
            return acc
        if isinstance(x, int):
            return self.evaluate_at(FieldElem(f, f.from_int(x)))
        raise TypeError(f"cannot evaluate at {type(x).__name__}")

    def to_list(self):
        return [int(c) for c in self.coeffs]

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = int(self.coeffs[i])
            if c:
                mono = "" if i == 0 else (THETA if i == 1 else f"{THETA}^{i}")
                terms.append(_fmt_coeff(self.field, c, mono))
        return "+".join(terms)

    def __repr__(self):
        return f"ThetaPoly({self})"


# -- E[θ, t] ------------------------------------------------------------------


class ThetaTPoly:
    """Polynomial in θ and t over E; ``coeffs[i, k]`` multiplies θ^i t^k."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        c = _arr(coeffs)
        if c.ndim != 2:
            c = c.reshape(-1, 1) if c.size else np.zeros((0, 0), dtype=np.int64)
        rows = np.flatnonzero(c.any(axis=1)) if c.size else []
        cols = np.flatnonzero(c.any(axis=0)) if c.size else []
        if len(rows) == 0:
            c = np.zeros((0, 0), dtype=np.int64)
        else:
            c = c[: rows[-1] + 1, : cols[-1] + 1]
        self.coeffs = np.ascontiguousarray(c)

    @classmethod
    def zero(cls, field):
        return cls(field, np.zeros((0, 0), dtype=np.int64))

    @classmethod
    def one(cls, field):
        return cls(field, [[1]])

    def is_zero(self):
        return self.coeffs.size == 0

    @property
    def theta_degree(self):
        return self.coeffs.shape[0] - 1

    @property
    def t_degree(self):
        return self.coeffs.shape[1] - 1

    def __add__(self, other):
        if not isinstance(other, ThetaTPoly):
            return NotImplemented
        _same_field(self.field, other.field)
        a, b = self.coeffs, other.coeffs
        shape = (max(a.shape[0], b.shape[0]), max(a.shape[1], b.shape[1]))
        out = np.zeros(shape, dtype=np.int64)
        out[: a.shape[0], : a.shape[1]] = a
        out[: b.shape[0], : b.shape[1]] = self.field.vadd(out[: b.shape[0], : b.shape[1]], b)
        return ThetaTPoly(self.field, out)

    def __neg__(self):
        return ThetaTPoly(self.field, self.field.vneg(self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, ThetaTPoly):
            return NotImplemented
        return self.field.spec == other.field.spec and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.field.spec, self.coeffs.shape, self.coeffs.tobytes()))

    def swap(self):
        """Exchange the roles of θ and t."""
        return ThetaTPoly(self.field, self.coeffs.T)

    def over_fq(self):
        return bool(np.all(self.coeffs < self.field.q))

    def evaluate_t(self, t0):
        """Substitute t = t0.

        FieldElem t0 gives a ThetaPoly; a LaurentSeries t0 gives a
        LaurentSeries (θ is then read as a series too).
        """
        f = self.field
        if self.is_zero():
            return ThetaPoly(f) if not isinstance(t0, LaurentSeries) else LaurentSeries.zero(f)
        if isinstance(t0, int):
            t0 = FieldElem(f, f.from_int(t0))
        if isinstance(t0, FieldElem):
            _same_field(f, t0.field)
            col = np.zeros(self.coeffs.shape[0], dtype=np.int64)
            for k in range(self.coeffs.shape[1] - 1, -1, -1):
                col = f.vadd(f.vscale(col, t0.code), self.coeffs[:, k])
            return ThetaPoly(f, col)
        if isinstance(t0, LaurentSeries):
            theta = LaurentSeries.theta(f)
            acc = LaurentSeries.zero(f)
            for i in range(self.coeffs.shape[0] - 1, -1, -1):
                acc = acc * theta + ThetaPoly(f, self.coeffs[i]).evaluate_at(t0)
            return acc
        raise TypeError(f"cannot substitute t = {type(t0).__name__}")

    def evaluate_theta(self, x):
        """Substitute θ = x (FieldElem); returns the polynomial in t as ThetaPoly."""
        return self.swap().evaluate_t(x)

    def to_lists(self):
        return self.coeffs.tolist()

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        nz = [(i, k) for i, k in zip(*np.nonzero(self.coeffs))]
        nz.sort(key=lambda ik: (-(ik[0] + ik[1]), -ik[1]))
        for i, k in nz:
            parts = []
            if i:
                parts.append(THETA if i == 1 else f"{THETA}^{i}")
            if k:
                parts.append("t" if k == 1 else f"t^{k}")
            terms.append(_fmt_coeff(self.field, int(self.coeffs[i, k]), "*".join(parts)))
        return "+".join(terms)

    def __repr__(self):
        return f"ThetaTPoly({self})"


# -- K_E = E((1/θ)) -----------------------------------------------------------


class LaurentSeries:
    """Element of E((1/θ)): coefficients of θ^{-val}, θ^{-(val+1)}, ...

    Inexact values are known modulo O(θ^{-prec}).  A value that vanishes to
    its precision has ``val == prec`` and no stored coefficients; the exact
    zero has ``val == prec == 0``.
    """

    __slots__ = ("field", "val", "prec", "coeffs", "exact")

    def __init__(self, field, coeffs=(), val=0, prec=None):
        c = _arr(coeffs)
        val = int(val)
        self.field = field
        if prec is None:
            nz = np.flatnonzero(c)
            if len(nz) == 0:
                val, c = 0, _EMPTY
            else:
                c = c[nz[0] : nz[-1] + 1]
                val += int(nz[0])
            self.exact = True
            self.prec = val + len(c)
        else:
            prec = int(prec)
            if val + len(c) > prec:
                c = c[: max(0, prec - val)]
            nz = np.flatnonzero(c)
            if len(nz) == 0:
                val, c = prec, _EMPTY
            else:
                val += int(nz[0])
                c = c[nz[0] :]
                if val + len(c) < prec:
                    c = np.concatenate([c, np.zeros(prec - val - len(c), dtype=np.int64)])
            self.exact = False
            self.prec = prec
        self.val = val
        self.coeffs = np.ascontiguousarray(c)

    # constructors
    @classmethod
    def zero(cls, field, prec=None):
        return cls(field, (), 0 if prec is None else prec, prec)

    @classmethod
    def one(cls, field):
        return cls(field, [1])

    @classmethod
    def monomial(cls, field, k, c=1):
        """c·θ^{-k}."""
        return cls(field, [_check_elem(field, c)], k)

    @classmethod
    def theta(cls, field, power=1):
        """θ^power (exact)."""
        return cls.monomial(field, -power)

    @classmethod
    def from_poly(cls, poly):
        c = poly.coeffs
        if len(c) == 0:
            return cls.zero(poly.field)
        return cls(poly.field, c[::-1], -(len(c) - 1))

    @classmethod
    def from_elem(cls, x):
        return cls(x.field, [x.code])

    @classmethod
    def coerce(cls, field, x):
        if isinstance(x, LaurentSeries):
            _same_field(field, x.field)
            return x
        if isinstance(x, ThetaPoly):
            _same_field(field, x.field)
            return cls.from_poly(x)
        if isinstance(x, FieldElem):
            _same_field(field, x.field)
            return cls.from_elem(x)
        if isinstance(x, (int, np.integer)):
            return cls(field, [field.from_int(int(x))])
        raise TypeError(f"cannot convert {type(x).__name__} to LaurentSeries")

    # basic queries
    @property
    def cap(self):
        """Absolute precision, infinite for exact values."""
        return INF if self.exact else self.prec

    @property
    def end(self):
        return self.val + len(self.coeffs)

    def is_zero(self):
        """True when the value vanishes to its precision."""
        return len(self.coeffs) == 0 or not self.coeffs.any()

    def is_exact_zero(self):
        return self.exact and len(self.coeffs) == 0

    def valuation(self):
        """v_∞; inf for exact zero, ``prec`` (a lower bound) when zero to precision."""
        if self.is_exact_zero():
            return INF
        return self.val

    def coeff(self, k):
        """Code of the coefficient of θ^{-k}."""
        if not self.exact and k >= self.prec:
            raise PrecisionError(f"coefficient of θ^-{k} beyond O(θ^-{self.prec})", self.prec)
        i = k - self.val
        return int(self.coeffs[i]) if 0 <= i < len(self.coeffs) else 0

    def leading(self):
        if self.is_zero():
            raise PrecisionError("no leading coefficient: zero to precision", self.prec)
        return FieldElem(self.field, int(self.coeffs[0]))

    def is_one_unit(self):
        return not self.is_zero() and self.val == 0 and self.coeffs[0] == 1

    def truncate(self, n):
        """The value modulo O(θ^{-n}) (never raises precision)."""
        if n >= self.cap:
            return self
        return LaurentSeries(self.field, self.coeffs, self.val, n)

    def window(self, lo, hi):
        """Coefficient codes for exponents lo..hi-1 (must be known)."""
        if not self.exact and hi > self.prec:
            raise PrecisionError(f"coefficients up to θ^-{hi - 1} beyond O(θ^-{self.prec})", self.prec)
        out = np.zeros(hi - lo, dtype=np.int64)
        a, b = max(lo, self.val), min(hi, self.end)
        if a < b:
            out[a - lo : b - lo] = self.coeffs[a - self.val : b - self.val]
        return out

    # arithmetic
    def _other(self, other):
        try:
            return LaurentSeries.coerce(self.field, other)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        f = self.field
        cap = min(self.cap, o.cap)
        lo = min(self.val, o.val)
        hi = max(self.end, o.end) if cap == INF else int(cap)
        if hi <= lo:
            return LaurentSeries.zero(f, None if cap == INF else int(cap))
        out = np.zeros(hi - lo, dtype=np.int64)
        for s in (self, o):
            a, b = s.val, min(s.end, hi)
            if a < b:
                out[a - lo : b - lo] = f.vadd(out[a - lo : b - lo], s.coeffs[: b - a])
        return LaurentSeries(f, out, lo, None if cap == INF else int(cap))

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.field, self.field.vneg(self.coeffs), self.val, None if self.exact else self.prec)

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        code = _check_elem(self.field, c)
        return LaurentSeries(self.field, self.field.vscale(self.coeffs, code), self.val, None if self.exact else self.prec)

    def shift(self, k):
        """Multiply by θ^{-k}."""
        return LaurentSeries(self.field, self.coeffs, self.val + k, None if self.exact else self.prec + k)

    def __mul__(self, other):
        if isinstance(other, (FieldElem, int, np.integer)):
            return self.scale(other)
        o = self._other(other)
        if o is NotImplemented:
            return o
        f = self.field
        if self.is_exact_zero() or o.is_exact_zero():
            return LaurentSeries.zero(f)
        lo = self.val + o.val
        if self.exact and o.exact:
            return LaurentSeries(f, kernels.conv(self.coeffs, o.coeffs, -1, f), lo)
        cap = int(min(self.cap + o.val, o.cap + self.val))
        n = cap - lo
        if n <= 0 or len(self.coeffs) == 0 or len(o.coeffs) == 0:
            return LaurentSeries.zero(f, cap)
        c = kernels.conv(self.coeffs[:n], o.coeffs[:n], n, f)
        return LaurentSeries(f, c, lo, cap)

    __rmul__ = __mul__

    def inverse(self, prec=None):
        """1/self.  Exact monomials invert exactly; other exact values need ``prec``.

        An inexact unit keeps its relative precision.
        """
        f = self.field
        if self.is_zero():
            raise PrecisionError(
                f"cannot invert a value that vanishes to precision O(θ^-{self.prec})", self.prec
            )
        v = self.val
        if self.exact and len(self.coeffs) == 1:
            return LaurentSeries(f, [f.inv(int(self.coeffs[0]))], -v)
        rel = INF if self.exact else self.prec - v
        if prec is not None:
            rel = min(rel, prec + v)
        if rel == INF:
            raise PrecisionError("inverse of a non-monomial exact series needs a target precision")
        rel = int(rel)
        if rel <= 0:
            return LaurentSeries.zero(f, -v + rel)
        c = self.coeffs[:rel]
        if len(c) < rel:
            c = np.concatenate([c, np.zeros(rel - len(c), dtype=np.int64)])
        b = np.array([f.inv(int(c[0]))], dtype=np.int64)
        two = f.from_int(2)
        k = 1
        while k < rel:
            k2 = min(2 * k, rel)
            t = f.vneg(kernels.conv(c[:k2], b, k2, f))
            if len(t) < k2:
                t = np.concatenate([t, np.zeros(k2 - len(t), dtype=np.int64)])
            t[0] = f.add(int(t[0]), two)
            b = kernels.conv(b, t, k2, f)
            k = k2
        return LaurentSeries(f, b, -v, -v + rel)

    def __truediv__(self, other):
        if isinstance(other, (FieldElem, int, np.integer)):
            code = _check_elem(self.field, other)
            return self.scale(FieldElem(self.field, self.field.inv(code)))
        return self.divide(other)

    def __rtruediv__(self, other):
        return LaurentSeries.coerce(self.field, other).divide(self)

    def divide(self, other, prec=None):
        """self/other; exact when both are exact and the division is exact."""
        o = LaurentSeries.coerce(self.field, other)
        f = self.field
        if self.exact and o.exact and not o.is_zero():
            if self.is_exact_zero():
                return self
            qz, rz = _pdivmod(f, self.coeffs, o.coeffs)
            if len(rz) == 0:
                return LaurentSeries(f, qz, self.val - o.val)
            if prec is None:
                raise PrecisionError("inexact division of exact series needs a target precision")
        target = None
        if prec is not None:
            target = prec - (self.val if not self.is_zero() else 0)
        return self * o.inverse(target)

    def __pow__(self, e):
        return self.power(e)

    def power(self, e, prec=None):
        """self**e, truncated to O(θ^{-prec}) when ``prec`` is given."""
        e = int(e)
        if e < 0:
            k = -e
            w = self.inverse(None if prec is None else prec + (k - 1) * self.val)
            return w.power(k, prec)
        # intermediate truncation is only safe when no factor has negative valuation
        trunc = prec is not None and self.val >= 0
        result = LaurentSeries.one(self.field)
        base = self.truncate(prec) if trunc else self
        while e:
            if e & 1:
                result = result * base
                if trunc:
                    result = result.truncate(prec)
            e >>= 1
            if e:
                base = base * base
                if trunc:
                    base = base.truncate(prec)
        return result if prec is None else result.truncate(prec)

    def frobenius(self):
        """self^p (coefficient Frobenius, exponents multiplied by p)."""
        f = self.field
        p = f.p
        if self.is_zero():
            return LaurentSeries.zero(f, None if self.exact else self.prec * p)
        n = (len(self.coeffs) - 1) * p + 1
        out = np.zeros(n, dtype=np.int64)
        out[::p] = f.vfrob(self.coeffs)
        return LaurentSeries(f, out, self.val * p, None if self.exact else self.prec * p)

    # comparison
    def __eq__(self, other):
        if isinstance(other, (int, FieldElem, ThetaPoly)):
            other = LaurentSeries.coerce(self.field, other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.field.spec == other.field.spec
            and self.exact == other.exact
            and self.val == other.val
            and self.prec == other.prec
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.field.spec, self.exact, self.val, self.prec, self.coeffs.tobytes()))

    def agreement(self, other):
        """Largest n such that self and other agree modulo O(θ^{-n}).

        Capped by the smaller precision; inf if both are exact and equal.
        """
        o = LaurentSeries.coerce(self.field, other)
        cap = min(self.cap, o.cap)
        d = self - o
        if d.is_zero():
            return cap
        return d.val

    def agrees_with(self, other, n):
        return self.agreement(other) >= n

    # presentation
    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            c = int(c)
            if not c:
                continue
            k = self.val + i
            mono = "" if k == 0 else f"{THETA}^{{{-k}}}"
            terms.append(_fmt_coeff(self.field, c, mono))
        if not self.exact:
            terms.append(f"O({THETA}^{{{-self.prec}}})")
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        return f"LaurentSeries({self})"

    def to_dict(self):
        return {
            "kind": "laurent_series",
            "val": self.val,
            "prec": self.prec,
            "coeffs": [self.field.render(int(c)) for c in self.coeffs],
            "exact": self.exact,
        }

    @classmethod
    def from_dict(cls, field, d):
        coeffs = [field.parse(s) for s in d["coeffs"]]
        return cls(field, coeffs, d["val"], None if d["exact"] else d["prec"])


# -- enumeration --------------------------------------------------------------


def _cap_check(what, size, cap):
    if size > cap:
        raise CapExceededError(what, size, cap)


def monic_from_index(field, e, idx):
    """Monic number idx of degree e: coefficient i is the i-th base-q digit."""
    q = field.q
    c = np.empty(e + 1, dtype=np.int64)
    for i in range(e):
        c[i] = idx % q
        idx //= q
    c[e] = 1
    return ThetaPoly(field, c)


def monic_enumerate(field, e, cap=DEFAULT_CAP, start=0, stop=None):
    """All monics of degree e, in lexicographic order of (c_0, ..., c_{e-1}).

    ``start``/``stop`` select a block of the index range for partitioned work.
    """
    size = field.q**e
    _cap_check(f"monic enumeration in degree {e}", size, cap)
    stop = size if stop is None else min(stop, size)
    return [monic_from_index(field, e, i) for i in range(start, stop)]


def monic_blocks(field, e, nblocks):
    """Split the index range of A_+(e) into contiguous blocks."""
    size = field.q**e
    nblocks = max(1, min(nblocks, size))
    step = -(-size // nblocks)
    return [(s, min(s + step, size)) for s in range(0, size, step)]


def prime_enumerate(field, dmax, cap=DEFAULT_CAP):
    """Monic irreducibles of degree 1..dmax over F_q, by degree then index."""
    _cap_check(f"prime enumeration up to degree {dmax}", field.q**dmax, cap)
    primes = []
    for d in range(1, dmax + 1):
        for a in monic_enumerate(field, d, cap):
            if all(not (a % f).is_zero() for f in primes if 2 * f.degree <= d):
                primes.append(a)
    return primes


# -- one-units ----------------------------------------------------------------


def bracket(a, d=None):
    """⟨a⟩ = a·θ^{-deg a} for monic a: an exact 1-unit."""
    if not isinstance(a, ThetaPoly) or not a.is_monic():
        raise HypothesisError("⟨·⟩ is defined on monic polynomials only")
    if d is not None and d != a.degree:
        raise HypothesisError(f"stated degree {d} differs from deg a = {a.degree}")
    return LaurentSeries(a.field, a.coeffs[::-1], 0)


def one_unit_pow(u, y, N, method="frobenius"):
    """u^y for a 1-unit u and y in Z_p, modulo O(θ^{-N}).

    ``method="binomial"`` sums C(y, k)·(u-1)^k with Lucas binomials;
    ``"frobenius"`` multiplies Frob^i(u)^{y_i} over the p-adic digits y_i,
    which is the same sum regrouped.  Truncated y raises PrecisionError when
    a retained k would need digits beyond the known ones.
    """
    f = u.field
    if not u.is_one_unit():
        raise HypothesisError("one_unit_pow needs a 1-unit (1 + higher terms)")
    y = PadicInt.coerce(f.p, y)
    N = min(N, u.cap)
    m = u - 1
    if m.is_exact_zero():
        return LaurentSeries.one(f)
    vm = m.val
    if N == INF:
        if y.is_exact and y.value >= 0:
            return u.power(y.value)
        raise PrecisionError("exact 1-unit to a non-polynomial power needs a precision N")
    N = int(N)
    if vm >= N:
        _require_digits(y, 1, vm, N)
        return LaurentSeries.one(f).truncate(N)
    if method == "binomial":
        return _pow_binomial(u, m, vm, y, N)
    if y.is_exact:
        if y.value >= 0 and u.exact and y.value * (u.end - 1) < N:
            return u.power(y.value)
        if 0 <= y.value <= N:
            return u.power(y.value, N).truncate(N)
        if -N <= y.value < 0:
            return u.inverse(N).power(-y.value, N).truncate(N)
    _require_digits(y, f.p, vm, N)
    result = LaurentSeries.one(f)
    frob = u.truncate(N)
    i = 0
    while f.p**i * vm < N:
        d = y.digit(i)
        for _ in range(d):
            result = (result * frob).truncate(N)
        frob = frob.frobenius().truncate(N)
        i += 1
    return result.truncate(N)


def _require_digits(y, p, vm, N):
    # every k with k*vm < N must satisfy k < p^M
    if not y.is_exact:
        kmax = -(-N // vm) - 1
        if kmax >= y.p ** len(y.digits):
            raise PrecisionError(
                f"y known mod {y.p}^{len(y.digits)} but precision {N} needs binomials up to k={kmax}",
                precision=len(y.digits),
            )


def _pow_binomial(u, m, vm, y, N):
    f = u.field
    _require_digits(y, f.p, vm, N)
    result = LaurentSeries.zero(f, N)
    mk = LaurentSeries.one(f)
    k = 0
    while k * vm < N:
        c = lucas_binom(y, k)
        if c:
            result = result + mk.scale(c)
        mk = (mk * m).truncate(N)
        k += 1
    return result.truncate(N)

