"""Finite checks of the two character-sum estimates over F_q-subspaces.

For a d-dimensional F_q-space W, F_q-linear maps L_1..L_t and exponents
i_1..i_t:

* if sum(i_h) < (q-1)d then sum_{w in W} prod_h L_h(x+w)^{i_h} = 0;
* if the target is valued and v(L_h(w)) > 0 on W, then with
  W_j = {w : v(L_h(w)) >= j for all h} and Q = sum_j dim W_j the sum at
  x = 0 has valuation >= (q-1)Q.

Both are implemented as decision procedures over explicit instances, used
as oracles by the L-series and special-polynomial checks.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import CapExceededError, HypothesisError, InconsistencyError
from .linalg import mat_vec, rank
from .rings import LaurentSeries
from .scalars import DEFAULT_CAP, FieldElem

INF = math.inf


class Vec:
    """Element of E^r with componentwise ring operations."""

    __slots__ = ("field", "arr")

    def __init__(self, field, arr):
        self.field = field
        self.arr = np.asarray(arr, dtype=np.int64)

    def __add__(self, other):
        return Vec(self.field, self.field.vadd(self.arr, other.arr))

    def __sub__(self, other):
        return Vec(self.field, self.field.vsub(self.arr, other.arr))

    def __mul__(self, other):
        if isinstance(other, Vec):
            return Vec(self.field, self.field.vmul(self.arr, other.arr))
        c = other.code if isinstance(other, FieldElem) else self.field.from_int(other)
        return Vec(self.field, self.field.vscale(self.arr, c))

    __rmul__ = __mul__

    def __pow__(self, e):
        f = self.field
        return Vec(f, np.array([f.pow(int(a), e) for a in self.arr], dtype=np.int64))

    def is_zero(self):
        return not self.arr.any()

    def __eq__(self, other):
        return isinstance(other, Vec) and np.array_equal(self.arr, other.arr)

    def __repr__(self):
        return f"Vec({[self.field.render(int(a)) for a in self.arr]})"


class MatrixMap:
    """w -> M·w from E^s to E^r."""

    def __init__(self, field, matrix):
        self.field = field
        self.matrix = np.asarray(matrix, dtype=np.int64)

    def __call__(self, w):
        return Vec(self.field, mat_vec(self.field, self.matrix, w.arr))


class ScaleMap:
    """w -> s·w on Laurent series (K_E-linear, hence F_q-linear)."""

    def __init__(self, s):
        self.s = s

    def __call__(self, w):
        return self.s * w


def identity(w):
    return w


def _is_zero(x):
    return x.is_zero()


def _zero_like(b):
    if isinstance(b, Vec):
        return Vec(b.field, np.zeros_like(b.arr))
    return LaurentSeries.zero(b.field)


def _coords(b):
    """Coordinate vector of a basis element, for independence checks."""
    if isinstance(b, Vec):
        return b.arr
    if not b.exact:
        raise HypothesisError("basis series must be exact")
    return b


@dataclass
class LinearSumInstance:
    """W = span(basis) with maps, exponents and shift x."""

    field: object
    basis: list
    maps: list
    exponents: list
    shift: object = None
    label: str = ""
    _elems: list = dc_field(default=None, repr=False)

    def __post_init__(self):
        if len(self.maps) != len(self.exponents):
            raise ValueError("need one exponent per map")
        if not self.maps:
            raise ValueError("at least one linear map is required")
        if any(i < 0 for i in self.exponents):
            raise ValueError("exponents must be nonnegative")
        if self.shift is None:
            self.shift = _zero_like(self.basis[0])

    @property
    def q(self):
        return self.field.q

    @property
    def dim(self):
        return len(self.basis)

    def check_independent(self):
        f = self.field
        if isinstance(self.basis[0], Vec):
            r = rank(f, np.stack([b.arr for b in self.basis]))
        else:
            lo = min(b.val for b in self.basis)
            hi = max(b.end for b in self.basis)
            r = rank(f, np.stack([b.window(lo, hi) for b in self.basis]))
        if r != self.dim:
            raise HypothesisError("basis of W is not F_q-linearly independent")

    def check_linear(self, rng, trials=3):
        """Spot-check L(a+b) = L(a)+L(b) and L(c·a) = c·L(a)."""
        f = self.field
        for h, L in enumerate(self.maps):
            for _ in range(trials):
                a = self._random_elem(rng)
                b = self._random_elem(rng)
                c = FieldElem(f, int(rng.integers(0, f.q)))
                if not _is_zero(L(a + b) - (L(a) + L(b))) or not _is_zero(L(a * c) - L(a) * c):
                    raise HypothesisError(f"map {h} is not F_q-linear")

    def _random_elem(self, rng):
        w = _zero_like(self.basis[0])
        for b in self.basis:
            w = w + b * FieldElem(self.field, int(rng.integers(0, self.field.q)))
        return w

    def elements(self, cap=DEFAULT_CAP):
        """All q^d elements of W, coefficient vectors in lexicographic order."""
        size = self.q**self.dim
        if size > cap:
            raise CapExceededError("subspace enumeration", size, cap)
        if self._elems is None:
            f = self.field
            scalars = [FieldElem(f, c) for c in range(self.q)]
            out = []
            for cs in itertools.product(range(self.q), repeat=self.dim):
                w = _zero_like(self.basis[0])
                for c, b in zip(reversed(cs), self.basis):
                    if c:
                        w = w + b * scalars[c]
                out.append(w)
            self._elems = out
        return self._elems


def monomial_sum(inst, cap=DEFAULT_CAP):
    """The literal sum over w in W of prod_h L_h(x + w)^{i_h}."""
    total = None
    for w in inst.elements(cap):
        xw = inst.shift + w
        term = None
        for L, i in zip(inst.maps, inst.exponents):
            v = L(xw) ** i
            term = v if term is None else term * v
        total = term if total is None else total + term
    return total


class Verdict(enum.Enum):
    GUARANTEED_ZERO = "guaranteed-zero"
    COMPUTED_ZERO = "computed-zero"
    COMPUTED_NONZERO = "computed-nonzero"


def vanishing_check(inst, cap=DEFAULT_CAP):
    """Verdict for an instance; hypothesis met but nonzero sum is an arithmetic bug."""
    s = monomial_sum(inst, cap)
    if sum(inst.exponents) < (inst.q - 1) * inst.dim:
        if not _is_zero(s):
            raise InconsistencyError(f"character sum nonzero under vanishing hypothesis: {inst.label}")
        return Verdict.GUARANTEED_ZERO
    return Verdict.COMPUTED_ZERO if _is_zero(s) else Verdict.COMPUTED_NONZERO


def _v_inf(x):
    return x.valuation()


def valuation_floor(inst, valuation=_v_inf, cap=DEFAULT_CAP):
    """(q-1)·Q with Q = sum_j dim W_j, by enumeration of W.  inf if Q is."""
    if not _is_zero(inst.shift):
        raise HypothesisError("the valuation estimate is stated for shift x = 0 only")
    elems = inst.elements(cap)
    mins = []
    for w in elems:
        vals = [valuation(L(w)) for L in inst.maps]
        if not _is_zero(w):
            for h, v in enumerate(vals):
                if not v > 0:
                    raise HypothesisError(f"v(L_{h + 1}(w)) = {v} is not positive for w = {w}")
        mins.append(min(vals))
    q = inst.q
    kernel = sum(1 for m in mins if m == INF)
    if kernel > 1:
        return INF
    finite = [m for m in mins if m != INF]
    Q = 0
    for j in range(1, int(max(finite, default=0)) + 1):
        size = sum(1 for m in mins if m >= j)
        dim = round(math.log(size, q))
        if q**dim != size:
            raise InconsistencyError(f"W_{j} has {size} elements, not a power of q")
        Q += dim
    return (q - 1) * Q


def valued_check(inst, valuation=_v_inf, cap=DEFAULT_CAP):
    """Return (bound, v(sum), ok) comparing the floor with the actual sum."""
    bound = valuation_floor(inst, valuation, cap)
    s = monomial_sum(inst, cap)
    v = INF if _is_zero(s) and getattr(s, "exact", True) else valuation(s)
    return bound, v, v >= bound


# -- randomized instances -----------------------------------------------------


def _rand_fq(rng, q, size):
    return rng.integers(0, q, size=size)


def _independent_vectors(rng, field, d, s):
    while True:
        m = _rand_fq(rng, field.q, (d, s))
        if rank(field, m) == d:
            return m


def random_vanishing_instance(rng, field, kind=None):
    """Random instance with sum(i_h) < (q-1)d."""
    q = field.q
    dmax = 4 if q <= 4 else 3
    d = int(rng.integers(1, dmax + 1))
    t = int(rng.integers(1, 4))
    budget = (q - 1) * d - 1
    exps = [0] * t
    for _ in range(int(rng.integers(0, budget + 1))):
        exps[int(rng.integers(0, t))] += 1
    kind = kind or ("matrix" if rng.random() < 0.5 else "series")
    if kind == "matrix":
        s = d + int(rng.integers(0, 3))
        basis = [Vec(field, row) for row in _independent_vectors(rng, field, d, s)]
        r = int(rng.integers(1, 4))
        maps = []
        for _ in range(t):
            maps.append(MatrixMap(field, _rand_fq(rng, q, (r, s))))
        shift = Vec(field, _rand_fq(rng, q, s))
    else:
        length = d + int(rng.integers(0, 3))
        rows = _independent_vectors(rng, field, d, length)
        basis = [LaurentSeries(field, row, 0) for row in rows]
        maps = []
        for _ in range(t):
            k = int(rng.integers(-2, 4))
            c = _rand_fq(rng, q, int(rng.integers(1, 4)))
            c[0] = int(rng.integers(1, q))
            maps.append(ScaleMap(LaurentSeries(field, c, k)))
        shift = LaurentSeries(field, _rand_fq(rng, q, length), int(rng.integers(-1, 2)))
    return LinearSumInstance(field, basis, maps, exps, shift, label=f"{kind} q={q} d={d} i={exps}")


def random_valued_instance(rng, field):
    """Random instance in θ^{-1}F_q[θ^{-1}] with maps of nonnegative valuation."""
    q = field.q
    dmax = 4 if q <= 3 else 3
    d = int(rng.integers(1, dmax + 1))
    length = d + int(rng.integers(0, 3))
    rows = _independent_vectors(rng, field, d, length)
    basis = [LaurentSeries(field, row, 1) for row in rows]
    t = int(rng.integers(1, 4))
    maps = []
    for _ in range(t):
        if rng.random() < 0.3:
            maps.append(identity)
            continue
        c = _rand_fq(rng, q, int(rng.integers(1, 4)))
        c[0] = int(rng.integers(1, q))
        maps.append(ScaleMap(LaurentSeries(field, c, int(rng.integers(0, 3)))))
    exps = [int(rng.integers(0, 2 * q)) for _ in range(t)]
    return LinearSumInstance(field, basis, maps, exps, label=f"valued q={q} d={d} i={exps}")


def sharpness_witnesses(fields):
    """Stored instances with sum(i_h) = (q-1)d whose sum is nonzero.

    W = F_q in E^1, identity map, exponent q-1: sum_w w^{q-1} = q-1 = -1.
    """
    out = []
    for f in fields:
        basis = [Vec(f, [1])]
        out.append(LinearSumInstance(f, basis, [identity], [f.q - 1], label=f"sharp q={f.q}"))
    return out


def run_selftest(seed, fields, n_vanishing=500, n_valued=200, cap=DEFAULT_CAP):
    """Run the randomized suites; returns a JSON-ready report."""
    rng = np.random.default_rng(seed)
    van_fail, val_fail = [], []
    for k in range(n_vanishing):
        f = fields[k % len(fields)]
        inst = random_vanishing_instance(rng, f)
        inst.check_independent()
        inst.check_linear(rng, trials=1)
        try:
            vanishing_check(inst, cap)
        except InconsistencyError:
            van_fail.append(inst.label)
    nonzero_valued = 0
    for k in range(n_valued):
        f = fields[k % len(fields)]
        inst = random_valued_instance(rng, f)
        inst.check_independent()
        bound, v, ok = valued_check(inst, cap=cap)
        if v != INF:
            nonzero_valued += 1
        if not ok:
            val_fail.append(f"{inst.label}: v={v} < {bound}")
    witnesses = []
    for inst in sharpness_witnesses(fields):
        verdict = vanishing_check(inst, cap)
        witnesses.append({"label": inst.label, "verdict": verdict.value})
    sharp_ok = any(w["verdict"] == Verdict.COMPUTED_NONZERO.value for w in witnesses)
    return {
        "kind": "charsum_selftest",
        "seed": seed,
        "q": [f.q for f in fields],
        "vanishing": {"instances": n_vanishing, "failures": van_fail},
        "valued": {"instances": n_valued, "nonzero_sums": nonzero_valued, "failures": val_fail},
        "sharpness": witnesses,
        "pass": not van_fail and not val_fail and sharp_ok,
    }
