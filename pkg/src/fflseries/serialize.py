"""JSON forms of results and parsing of θ-expressions."""

from __future__ import annotations

import json

import sympy

from .rings import LaurentSeries, ThetaPoly, ThetaTPoly
from .scalars import FieldElem, PadicInt


def dumps(obj):
    """Deterministic JSON text (sorted keys, fixed indentation)."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def field_to_dict(field):
    return field.spec.to_dict()


def to_jsonable(x):
    """Convert library values (recursively) to JSON-ready structures."""
    if isinstance(x, LaurentSeries):
        d = x.to_dict()
        d["text"] = str(x)
        return d
    if isinstance(x, ThetaPoly):
        return {"kind": "theta_poly", "coeffs": [x.field.render(c) for c in x.to_list()], "text": str(x)}
    if isinstance(x, ThetaTPoly):
        f = x.field
        return {
            "kind": "theta_t_poly",
            "coeffs": [[f.render(int(c)) for c in row] for row in x.coeffs],
            "text": str(x),
        }
    if isinstance(x, FieldElem):
        return x.field.render(x.code)
    if isinstance(x, PadicInt):
        return x.descriptor()
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, float) and x == float("inf"):
        return "inf"
    if hasattr(x, "item"):  # numpy scalars
        return x.item()
    return x


def series_from_json(field, d):
    if d.get("kind") != "laurent_series":
        raise ValueError(f"not a serialized Laurent series: kind={d.get('kind')!r}")
    return LaurentSeries.from_dict(field, d)


def theta_t_from_json(field, d):
    return ThetaTPoly(field, [[field.parse(s) for s in row] for row in d["coeffs"]])


# -- expressions ------------------------------------------------------------------

_THETA, _G, _H = sympy.symbols("theta g h")


def _normalize(text):
    return text.strip().replace("θ", "theta").replace("^", "**").replace("{", "(").replace("}", ")")


def _scalar(field, expr, text):
    """Evaluate a polynomial in g, h with rational coefficients in the field."""
    expr = sympy.expand(expr)
    total = 0
    for term in sympy.Add.make_args(expr):
        coeff, rest = term.as_coeff_Mul()
        num, den = sympy.fraction(sympy.Rational(coeff))
        c = field.from_int(int(num))
        if int(den) != 1:
            d = field.from_int(int(den))
            if d == 0:
                raise ValueError(f"denominator divisible by p in {text!r}")
            c = field.mul(c, field.inv(d))
        for base, exp in (rest.as_powers_dict().items() if rest != 1 else []):
            if base == _G:
                if field.m0 == 1:
                    raise ValueError("generator g undefined for prime q")
                c = field.mul(c, field.pow(field.p, int(exp)))
            elif base == _H:
                if field.n == 1:
                    raise ValueError("generator h undefined when n=1")
                c = field.mul(c, field.pow(field.q, int(exp)))
            else:
                raise ValueError(f"unexpected symbol {base} in {text!r}")
        total = field.add(total, c)
    return total


def parse_laurent(field, text):
    """Parse a Laurent polynomial in θ over E, e.g. ``1+θ^-1``, ``g*theta^2``.

    Returns a FieldElem for constants and an exact LaurentSeries otherwise.
    """
    try:
        expr = sympy.sympify(_normalize(text), locals={"theta": _THETA, "g": _G, "h": _H})
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ValueError(f"cannot parse expression {text!r}") from exc
    expr = sympy.expand(expr)
    by_power = {}
    for term in sympy.Add.make_args(expr):
        if term == 0:
            continue
        coeff, th = term.as_independent(_THETA, as_Add=False)
        if th == 1:
            k = 0
        else:
            base, k = th.as_base_exp()
            if base != _THETA or not k.is_integer:
                raise ValueError(f"term {term} of {text!r} is not c·θ^k")
            k = int(k)
        code = _scalar(field, coeff, text)
        by_power[k] = field.add(by_power.get(k, 0), code)
    by_power = {k: c for k, c in by_power.items() if c}
    if not by_power:
        return FieldElem(field, 0)
    if set(by_power) == {0}:
        return FieldElem(field, by_power[0])
    hi, lo = max(by_power), min(by_power)
    coeffs = [by_power.get(k, 0) for k in range(hi, lo - 1, -1)]
    return LaurentSeries(field, coeffs, -hi)


def parse_poly(field, text):
    """Parse a polynomial in θ over F_q into a ThetaPoly."""
    v = parse_laurent(field, text)
    if isinstance(v, FieldElem):
        return ThetaPoly.constant(field, v)
    if v.end > 1:
        raise ValueError(f"{text!r} has negative powers of θ")
    return ThetaPoly(field, [v.coeff(-k) for k in range(-v.val + 1)])


def parse_padic(p, text):
    """An integer, or base-p digits lowest first as ``[d0,d1,...]``."""
    s = text.strip()
    if s.startswith("["):
        body = s.strip("[]").split("]")[0]
        digits = [int(x) for x in body.split(",") if x.strip()]
        return PadicInt.truncated(p, digits)
    return PadicInt.exact(p, int(s))
