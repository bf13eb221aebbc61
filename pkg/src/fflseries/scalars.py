"""Finite fields F_p ⊂ F_q ⊂ E and p-adic exponents.

Elements of the tower are encoded as integer codes.  An element of
E = F_q[h]/(modulus_E) is sum(c_i h^i) with c_i in F_q, and each c_i is
sum(d_k g^k) in F_p[g]/(modulus_q).  The code is the integer whose base-p
digits are the d's, lowest first, so that

* F_p is exactly the codes < p,
* F_q is exactly the codes < q,
* addition is digit-wise addition mod p on codes.

Multiplication goes through log/exp tables built from a primitive element.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import (
    CapExceededError,
    FieldMismatchError,
    FieldZeroDivisionError,
    PrecisionError,
)

DEFAULT_CAP = 10**6
MAX_FIELD_ORDER = 1024

# Conway polynomials, lowest degree first.
DEFAULT_MODULI = {
    2: (0, 1),
    3: (0, 1),
    4: (1, 1, 1),
    5: (0, 1),
    8: (1, 1, 0, 1),
    9: (2, 2, 1),
}

LEVELS = ("p", "q", "E")


def is_prime(n):
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def prime_power(q):
    """Return (p, m) with q = p**m, or raise ValueError."""
    for p in range(2, q + 1):
        if q % p == 0:
            m, r = 0, q
            while r % p == 0:
                r //= p
                m += 1
            if r != 1 or not is_prime(p):
                break
            return p, m
    raise ValueError(f"{q} is not a prime power")


# -- small polynomial helpers over an abstract base field -------------------
# Polynomials are lists of base codes, lowest degree first.  ``ops`` is a
# tuple (add, mul, neg) of scalar functions.


def _poly_rem(f, g, ops):
    """Remainder of f modulo the monic polynomial g."""
    add, mul, neg = ops
    r = list(f)
    dg = len(g) - 1
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k]
        if c:
            nc = neg(c)
            for i in range(dg + 1):
                r[k - dg + i] = add(r[k - dg + i], mul(nc, g[i]))
    return r[:dg]


def _poly_mulmod(a, b, mod, ops):
    add, mul, _ = ops
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] = add(prod[i + j], mul(x, y))
    return _poly_rem(prod, mod, ops)


def _is_irreducible(mod, base_size, ops):
    """Trial division by every monic polynomial of degree <= deg/2."""
    m = len(mod) - 1
    if m <= 0:
        return False
    if m == 1:
        return True
    for d in range(1, m // 2 + 1):
        for idx in range(base_size**d):
            g = []
            r = idx
            for _ in range(d):
                g.append(r % base_size)
                r //= base_size
            g.append(1)
            if not any(_poly_rem(mod, g, ops)):
                return False
    return True


def _find_irreducible(degree, base_size, ops):
    """Lexicographically first monic irreducible of the given degree."""
    for idx in range(base_size**degree):
        g = []
        r = idx
        for _ in range(degree):
            g.append(r % base_size)
            r //= base_size
        g.append(1)
        if _is_irreducible(g, base_size, ops):
            return tuple(g)
    raise ValueError(f"no irreducible of degree {degree}")  # pragma: no cover


def _log_tables(size, mul):
    """exp/log tables from the first element of multiplicative order size-1."""
    if size == 2:
        return [1], {1: 0}
    for cand in range(2, size):
        powers = [1, cand]
        x = cand
        while True:
            x = mul(x, cand)
            if x == 1 or x == 0 or len(powers) >= size:
                break
            powers.append(x)
        if x == 1 and len(powers) == size - 1:
            return powers, {v: k for k, v in enumerate(powers)}
    raise ValueError("quotient ring is not a field (modulus reducible)")


@dataclass(frozen=True)
class FieldSpec:
    """p, extension degree m0 of F_q over F_p, degree n of E over F_q, moduli.

    ``modulus_q`` has F_p coefficients, ``modulus_E`` has F_q coefficients
    given as codes; both lowest degree first and monic.
    """

    p: int
    m0: int = 1
    n: int = 1
    modulus_q: tuple = None
    modulus_E: tuple = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.m0 < 1 or self.n < 1:
            raise ValueError("extension degrees must be positive")
        mq = self.modulus_q
        if mq is None:
            mq = DEFAULT_MODULI.get(self.q)
            if mq is None:
                mq = _find_irreducible(self.m0, self.p, _fp_ops(self.p))
        mq = tuple(int(c) % self.p for c in mq)
        if len(mq) != self.m0 + 1 or mq[-1] != 1:
            raise ValueError(f"modulus_q must be monic of degree {self.m0}")
        object.__setattr__(self, "modulus_q", mq)
        if self.modulus_E is not None:
            me = tuple(int(c) for c in self.modulus_E)
            if len(me) != self.n + 1 or me[-1] != 1 or any(not 0 <= c < self.q for c in me):
                raise ValueError(f"modulus_E must be monic of degree {self.n} over F_q")
            object.__setattr__(self, "modulus_E", me)

    @property
    def q(self):
        return self.p**self.m0

    @property
    def order(self):
        return self.q**self.n

    @classmethod
    def from_q(cls, q, n=1, modulus_q=None, modulus_E=None):
        p, m0 = prime_power(q)
        return cls(p, m0, n, modulus_q, modulus_E)

    def to_dict(self):
        return {
            "p": self.p,
            "m0": self.m0,
            "n": self.n,
            "modulus_q": list(self.modulus_q),
            "modulus_E": list(get_field(self).modulus_E),
        }


def _fp_ops(p):
    return (lambda a, b: (a + b) % p, lambda a, b: a * b % p, lambda a: -a % p)


@lru_cache(maxsize=None)
def get_field(spec):
    """The (cached) :class:`Field` for a spec; equal specs share tables."""
    return Field(spec)


class Field:
    """Arithmetic tables for E with its subfields F_q and F_p."""

    def __init__(self, spec):
        self.spec = spec
        p, m0, n = spec.p, spec.m0, spec.n
        self.p, self.m0, self.n = p, m0, n
        self.q = q = p**m0
        self.order = Q = q**n
        if Q > MAX_FIELD_ORDER:
            raise ValueError(f"field order {Q} exceeds table limit {MAX_FIELD_ORDER}")
        self.degree = m0 * n  # over F_p

        fp = _fp_ops(p)
        if m0 > 1 and not _is_irreducible(list(spec.modulus_q), p, fp):
            raise ValueError(f"modulus_q {spec.modulus_q} is reducible over F_{p}")
        self.modulus_q = spec.modulus_q

        # F_q tables via F_p polynomial arithmetic.
        def q_digits(c):
            return [(c // p**k) % p for k in range(m0)]

        def q_code(d):
            return sum(int(x) * p**k for k, x in enumerate(d))

        def q_mul(a, b):
            if m0 == 1:
                return a * b % p
            return q_code(_poly_mulmod(q_digits(a), q_digits(b), list(spec.modulus_q), fp))

        qexp, qlog = _log_tables(q, q_mul)
        q_add = lambda a, b: self._digit_add(a, b, m0)  # noqa: E731

        def q_mul_fast(a, b):
            if a == 0 or b == 0:
                return 0
            return qexp[(qlog[a] + qlog[b]) % (q - 1)]

        q_neg = lambda a: self._digit_neg(a, m0)  # noqa: E731
        qops = (q_add, q_mul_fast, q_neg)

        me = spec.modulus_E
        if me is None:
            me = (0, 1) if n == 1 else _find_irreducible(n, q, qops)
        elif n > 1 and not _is_irreducible(list(me), q, qops):
            raise ValueError(f"modulus_E {me} is reducible over F_{q}")
        self.modulus_E = tuple(me)

        def e_mul(a, b):
            if n == 1:
                return q_mul_fast(a, b)
            da = [(a // q**i) % q for i in range(n)]
            db = [(b // q**i) % q for i in range(n)]
            r = _poly_mulmod(da, db, list(me), qops)
            return sum(c * q**i for i, c in enumerate(r))

        eexp, elog = _log_tables(Q, e_mul)
        self._exp = eexp
        self._log = [-1] * Q
        for k, v in enumerate(eexp):
            self._log[v] = k

        codes = np.arange(Q, dtype=np.int64)
        digits = np.stack([(codes // p**k) % p for k in range(self.degree)], axis=1)
        self._digits = digits
        self._place = p ** np.arange(self.degree, dtype=np.int64)
        self.add_table = ((digits[:, None, :] + digits[None, :, :]) % p) @ self._place
        self.neg_table = ((-digits) % p) @ self._place
        log = np.array(self._log, dtype=np.int64)
        exp = np.array(eexp, dtype=np.int64)
        ls = (log[:, None] + log[None, :]) % (Q - 1)
        mul = exp[ls]
        mul[0, :] = 0
        mul[:, 0] = 0
        self.mul_table = np.ascontiguousarray(mul)
        self.add_table = np.ascontiguousarray(self.add_table)
        inv = np.zeros(Q, dtype=np.int64)
        inv[1:] = exp[(-log[1:]) % (Q - 1)]
        self.inv_table = inv
        frob = np.zeros(Q, dtype=np.int64)
        frob[1:] = exp[(p * log[1:]) % (Q - 1)]
        self.frob_table = frob
        self._small = Q <= 256
        if self._small:
            self._add_l = self.add_table.tolist()
            self._mul_l = self.mul_table.tolist()
        self._neg_l = self.neg_table.tolist()
        self._inv_l = inv.tolist()

    # -- digit helpers used while tables are being built
    def _digit_add(self, a, b, ndig):
        p = self.p
        r, place = 0, 1
        for _ in range(ndig):
            r += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return r

    def _digit_neg(self, a, ndig):
        p = self.p
        r, place = 0, 1
        for _ in range(ndig):
            r += ((-(a % p)) % p) * place
            a //= p
            place *= p
        return r

    def __repr__(self):
        return f"Field(p={self.p}, q={self.q}, |E|={self.order})"

    def __reduce__(self):
        return (get_field, (self.spec,))

    # -- scalar arithmetic on codes
    def add(self, a, b):
        if self._small:
            return self._add_l[a][b]
        return int(self.add_table[a, b])

    def neg(self, a):
        return self._neg_l[a]

    def sub(self, a, b):
        return self.add(a, self._neg_l[b])

    def mul(self, a, b):
        if self._small:
            return self._mul_l[a][b]
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]

    def inv(self, a):
        if a == 0:
            raise FieldZeroDivisionError("inverse of zero field element")
        return self._inv_l[a]

    def pow(self, a, e):
        if a == 0:
            if e > 0:
                return 0
            if e == 0:
                return 1
            raise FieldZeroDivisionError("negative power of zero")
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    def frob(self, a):
        return int(self.frob_table[a])

    def from_int(self, k):
        """Image of an integer under Z -> F_p."""
        return k % self.p

    # -- vectorised arithmetic on code arrays
    def vadd(self, x, y):
        if self.degree == 1:
            return (x + y) % self.p
        if self.p == 2:
            return np.bitwise_xor(x, y)
        return self.add_table[x, y]

    def vneg(self, x):
        if self.p == 2:
            return x
        if self.degree == 1:
            return (-x) % self.p
        return self.neg_table[x]

    def vsub(self, x, y):
        return self.vadd(x, self.vneg(y))

    def vmul(self, x, y):
        if self.degree == 1:
            return (x * y) % self.p
        return self.mul_table[x, y]

    def vscale(self, x, c):
        if self.degree == 1:
            return (x * c) % self.p
        return self.mul_table[c][x]

    def vfrob(self, x):
        if self.degree == 1:
            return x
        return self.frob_table[x]

    def vsum(self, x, axis=0):
        """Field sum along an axis."""
        x = np.asarray(x, dtype=np.int64)
        if self.degree == 1:
            return x.sum(axis=axis) % self.p
        if self.p == 2:
            return np.bitwise_xor.reduce(x, axis=axis)
        d = self._digits[x]  # (..., degree)
        s = d.sum(axis=axis) % self.p
        return s @ self._place

    # -- levels and rendering
    def level_of(self, code):
        if code < self.p:
            return "p"
        if code < self.q:
            return "q"
        return "E"

    def level_size(self, level):
        return {"p": self.p, "q": self.q, "E": self.order}[level]

    def render(self, code):
        """Polynomial string in g (generator of F_q) and h (generator of E)."""
        if code < self.q:
            return self._render_q(code)
        terms = []
        for i in range(self.n - 1, -1, -1):
            c = (code // self.q**i) % self.q
            if not c:
                continue
            mono = "" if i == 0 else ("h" if i == 1 else f"h^{i}")
            cs = self._render_q(c)
            if not mono:
                terms.append(cs)
            elif c == 1:
                terms.append(mono)
            elif "+" in cs:
                terms.append(f"({cs})*{mono}")
            else:
                terms.append(f"{cs}*{mono}")
        return "+".join(terms)

    def _render_q(self, code):
        if code < self.p:
            return str(code)
        terms = []
        for k in range(self.m0 - 1, -1, -1):
            d = (code // self.p**k) % self.p
            if not d:
                continue
            mono = "" if k == 0 else ("g" if k == 1 else f"g^{k}")
            if not mono:
                terms.append(str(d))
            elif d == 1:
                terms.append(mono)
            else:
                terms.append(f"{d}*{mono}")
        return "+".join(terms)

    def parse(self, text):
        """Inverse of :meth:`render`: sums of products of integers, g^k, h^k, (..)."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty field element")
        total = 0
        for term in _split_top(s, "+"):
            neg = term.startswith("-")
            val = 1
            for fac in _split_top(term.lstrip("-"), "*"):
                val = self.mul(val, self._parse_factor(fac, text))
            total = self.add(total, self.neg(val) if neg else val)
        return total

    def _parse_factor(self, fac, text):
        if fac.startswith("(") and fac.endswith(")"):
            return self.parse(fac[1:-1])
        if fac.isdigit():
            return int(fac) % self.p
        m = re.fullmatch(r"([gh])(?:\^(\d+))?", fac)
        if not m:
            raise ValueError(f"cannot parse field element {text!r}")
        e = int(m.group(2) or 1)
        if m.group(1) == "g":
            if self.m0 == 1:
                raise ValueError("generator g undefined for prime q")
            return self.pow(self.p, e)
        if self.n == 1:
            raise ValueError("generator h undefined when n=1")
        return self.pow(self.q, e)


def _split_top(s, sep):
    """Split on ``sep`` outside parentheses."""
    parts, depth, cur = [], 0, ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return parts


class FieldElem:
    """Immutable element of E, F_q or F_p.

    ``level`` marks which field the element is regarded as living in; it
    fixes the length of :attr:`coeffs`.
    """

    __slots__ = ("field", "code", "level")

    def __init__(self, field, code, level=None):
        code = int(code)
        if not 0 <= code < field.order:
            raise ValueError(f"code {code} out of range for {field}")
        if level is None:
            level = field.level_of(code)
        elif field.level_size(level) <= code:
            raise ValueError(f"code {code} is not in level {level}")
        self.field = field
        self.code = code
        self.level = level

    @classmethod
    def from_coeffs(cls, field, coeffs, level):
        base = {"p": field.p, "q": field.p, "E": field.q}[level]
        code = sum(int(c) * base**i for i, c in enumerate(coeffs))
        return cls(field, code, level)

    @property
    def coeffs(self):
        """Coefficients over the level's base field (F_p for F_q, F_q for E)."""
        f = self.field
        if self.level == "p":
            return (self.code,)
        if self.level == "q":
            return tuple((self.code // f.p**k) % f.p for k in range(f.m0))
        return tuple((self.code // f.q**i) % f.q for i in range(f.n))

    def _other(self, other):
        if isinstance(other, FieldElem):
            if other.field is not self.field and other.field.spec != self.field.spec:
                raise FieldMismatchError("field elements from different FieldSpecs")
            return other
        if isinstance(other, int):
            return FieldElem(self.field, self.field.from_int(other))
        return NotImplemented

    def _lvl(self, other):
        return max(self.level, other.level, key=LEVELS.index)

    def _wrap(self, code, level):
        if self.field.level_size(level) <= code:
            level = self.field.level_of(code)
        return FieldElem(self.field, code, level)

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field.add(self.code, o.code), self._lvl(o))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.code), self.level)

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field.mul(self.code, o.code), self._lvl(o))

    __rmul__ = __mul__

    def inverse(self):
        return FieldElem(self.field, self.field.inv(self.code), self.level)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __pow__(self, e):
        return FieldElem(self.field, self.field.pow(self.code, int(e)), self.level)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.code == self.field.from_int(other)
        if isinstance(other, FieldElem):
            return self.field.spec == other.field.spec and self.code == other.code
        return NotImplemented

    def __hash__(self):
        return hash((self.field.spec, self.code))

    def __bool__(self):
        return self.code != 0

    def __str__(self):
        return self.field.render(self.code)

    def __repr__(self):
        return f"FieldElem({self.field.render(self.code)!r})"


# -- functional interface -----------------------------------------------------


def _check_same(a, b):
    if a.field.spec != b.field.spec:
        raise FieldMismatchError("field elements from different FieldSpecs")


def field_add(a, b):
    _check_same(a, b)
    return a + b


def field_mul(a, b):
    _check_same(a, b)
    return a * b


def field_inv(a):
    return a.inverse()


def field_pow(a, e):
    return a**e


def enumerate_field(spec, level="q", cap=DEFAULT_CAP):
    """All elements of a level in lexicographic order of coefficient vectors."""
    f = spec if isinstance(spec, Field) else get_field(spec)
    size = f.level_size(level)
    if size > cap:
        raise CapExceededError(f"field level {level}", size, cap)
    # Codes enumerate coefficient vectors lowest-coefficient-fastest.
    return [FieldElem(f, c, level) for c in range(size)]


# -- p-adic exponents ---------------------------------------------------------


@dataclass(frozen=True)
class PadicInt:
    """An exponent y in Z_p: either an exact integer or M known base-p digits."""

    p: int
    value: int = None
    digits: tuple = field(default=None)

    def __post_init__(self):
        if (self.value is None) == (self.digits is None):
            raise ValueError("give exactly one of value / digits")
        if self.digits is not None:
            d = tuple(int(x) for x in self.digits)
            if any(not 0 <= x < self.p for x in d):
                raise ValueError("p-adic digits must lie in [0, p-1]")
            object.__setattr__(self, "digits", d)

    @classmethod
    def exact(cls, p, value):
        return cls(p, value=int(value))

    @classmethod
    def truncated(cls, p, digits):
        return cls(p, digits=tuple(digits))

    @classmethod
    def coerce(cls, p, y):
        if isinstance(y, PadicInt):
            if y.p != p:
                raise FieldMismatchError(f"p-adic integer for p={y.p}, expected p={p}")
            return y
        return cls.exact(p, y)

    @property
    def mode(self):
        return "exact" if self.value is not None else "truncated"

    @property
    def is_exact(self):
        return self.value is not None

    @property
    def precision(self):
        """Number of known digits M (math.inf for exact integers)."""
        return math.inf if self.is_exact else len(self.digits)

    def digit(self, i):
        if self.is_exact:
            # Python floor semantics give the p-adic digits of negatives.
            return (self.value // self.p**i) % self.p
        if i >= len(self.digits):
            raise PrecisionError(
                f"p-adic digit {i} requested but only {len(self.digits)} known",
                precision=len(self.digits),
            )
        return self.digits[i]

    def residue(self, M):
        """y mod p^M as an integer in [0, p^M)."""
        if self.is_exact:
            return self.value % self.p**M
        if M > len(self.digits):
            raise PrecisionError(f"y known only mod p^{len(self.digits)}", len(self.digits))
        return sum(d * self.p**i for i, d in enumerate(self.digits[:M]))

    def truncate(self, M):
        return PadicInt.truncated(self.p, [self.digit(i) for i in range(M)])

    def _combine(self, other, op):
        other = PadicInt.coerce(self.p, other)
        if self.is_exact and other.is_exact:
            return PadicInt.exact(self.p, op(self.value, other.value))
        M = min(self.precision, other.precision)
        r = op(self.residue(M), other.residue(M)) % self.p**M
        return PadicInt.truncated(self.p, [(r // self.p**i) % self.p for i in range(M)])

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self):
        return PadicInt.exact(self.p, 0) - self

    def __int__(self):
        if not self.is_exact:
            raise PrecisionError("truncated p-adic integer has no exact value", len(self.digits))
        return self.value

    def descriptor(self):
        if self.is_exact:
            return str(self.value)
        return "[" + ",".join(map(str, self.digits)) + f"]_{self.p}"

    def __str__(self):
        if self.is_exact:
            return str(self.value)
        return "".join(map(str, reversed(self.digits))) + f"_{self.p} + O({self.p}^{len(self.digits)})"


def padic_digit(y, i):
    return y.digit(i)


def lucas_binom(y, k):
    """C(y, k) mod p, digit by digit (Lucas).  Returns the residue in [0, p)."""
    if k < 0:
        return 0
    p = y.p
    if not y.is_exact and k >= p ** len(y.digits):
        raise PrecisionError(
            f"C(y, {k}) needs more than the {len(y.digits)} known digits of y",
            precision=len(y.digits),
        )
    r, i = 1, 0
    while k:
        ki = k % p
        yi = y.digit(i)
        if ki > yi:
            return 0
        r = r * math.comb(yi, ki) % p
        k //= p
        i += 1
    return r
