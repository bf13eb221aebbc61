import json
import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fld
from fflseries import LaurentSeries, PadicInt, ThetaPoly, power_sum
from fflseries.cache import PowerSumCache
from fflseries.config import load_config, parse_config_text
from fflseries.lseries import power_sum_key
from fflseries.scalars import FieldElem
from fflseries.serialize import (
    dumps,
    parse_laurent,
    parse_padic,
    parse_poly,
    series_from_json,
    theta_t_from_json,
    to_jsonable,
)

LS = LaurentSeries


# -- config ----------------------------------------------------------------------


def test_config_grammar():
    cfg = parse_config_text("q = 4   # field size\n; comment\n\nprec=12\nmodulus_q = 1,1,1\ncache =\n")
    assert cfg == {"q": 4, "prec": 12, "modulus_q": (1, 1, 1), "cache": None}


def test_unknown_key_rejected():
    with pytest.raises(ValueError):
        parse_config_text("colour = red\n")


def test_layering(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("q = 3\nthreads = 2\ncache = /nowhere\nprec = 11\n")
    cfg = load_config(str(p), env={"FFLSERIES_THREADS": "4"}, prec=9)
    assert (cfg.q, cfg.threads, cfg.cache, cfg.prec) == (3, 4, "/nowhere", 9)
    cfg = load_config(str(p), env={"FFLSERIES_CACHE": ""})
    assert cfg.cache is None


def test_config_invariants():
    with pytest.raises(ValueError):
        load_config(env={}, prec=0)
    with pytest.raises(ValueError):
        load_config(env={}, q=5, cap=3)
    with pytest.raises(ValueError):
        load_config(env={}, format="xml")


def test_default_cache_is_off():
    assert load_config(env={}).cache is None


# -- serialization ---------------------------------------------------------------


def test_series_json_shape():
    f = fld(4)
    s = LS(f, [1, f.parse("g"), 0, 1], -1, 5)
    d = to_jsonable(s)
    assert set(d) >= {"val", "prec", "coeffs", "exact"}
    assert d["coeffs"][1] == "g"


@settings(max_examples=80)
@given(
    st.sampled_from([2, 3, 4, 9]),
    st.lists(st.integers(0, 100), max_size=10),
    st.integers(-5, 5),
    st.one_of(st.none(), st.integers(0, 20)),
)
def test_series_roundtrip(q, cs, val, extra):
    f = fld(q)
    cs = [c % q for c in cs]
    s = LS(f, cs, val, None if extra is None else val + extra)
    text = dumps(to_jsonable(s))
    assert series_from_json(f, json.loads(text)) == s


def test_theta_t_roundtrip():
    from fflseries.special import special_poly

    f = fld(3)
    for c in special_poly(f, 2, 3).coeffs:
        assert theta_t_from_json(f, to_jsonable(c)) == c


def test_parse_laurent():
    f = fld(3)
    assert parse_laurent(f, "1+θ^-1") == LS(f, [1, 1])
    assert parse_laurent(f, "theta^2 - 1") == LS(f, [1, 0, 2], -2)
    assert parse_laurent(f, "2").code == 2
    assert parse_laurent(f, "θ^{-2}*2") == LS(f, [2], 2)
    f4 = fld(4)
    assert parse_laurent(f4, "g*theta + g^2") == LS(f4, [f4.parse("g"), f4.parse("g+1")], -1)


def test_parse_errors():
    f = fld(3)
    for bad in ["θ^(1/2)", "x+1", "1/3", "(("]:
        with pytest.raises(ValueError):
            parse_laurent(f, bad)
    with pytest.raises(ValueError):
        parse_poly(f, "θ + θ^-1")
    with pytest.raises(ValueError):
        parse_laurent(f, "g")


def test_parse_poly_and_padic():
    f = fld(2)
    assert parse_poly(f, "θ^2+θ+1") == ThetaPoly(f, [1, 1, 1])
    assert parse_padic(2, "-3") == PadicInt.exact(2, -3)
    assert parse_padic(3, "[1,2,0]") == PadicInt.truncated(3, [1, 2, 0])


def test_dumps_is_deterministic():
    a = {"b": [1, 2], "a": {"z": 1, "y": 2}}
    assert dumps(a) == dumps(json.loads(dumps(a)))
    assert dumps(a).index('"a"') < dumps(a).index('"b"')


# -- cache -----------------------------------------------------------------------


def _key(f):
    return power_sum_key(f, 3, 1, PadicInt.exact(f.p, 2), FieldElem(f, 1))


def test_put_then_get(tmp_path):
    f = fld(3)
    c = PowerSumCache(tmp_path)
    v = LS(f, [1, 2, 0, 1], 0, 12)
    assert c.put("power_sum", _key(f), v)
    assert c.get("power_sum", _key(f), f, 12) == v
    assert c.get("power_sum", _key(f), f, 5) == v.truncate(5)
    assert c.get("power_sum", _key(f), f, 13) is None


def test_version_mismatch_is_absent(tmp_path):
    f = fld(3)
    PowerSumCache(tmp_path).put("power_sum", _key(f), LS(f, [1], 0, 10))
    assert PowerSumCache(tmp_path, version="other").get("power_sum", _key(f), f, 5) is None


def test_lower_precision_put_rejected(tmp_path):
    f = fld(3)
    c = PowerSumCache(tmp_path)
    hi = LS(f, [1, 1, 1], 0, 20)
    c.put("power_sum", _key(f), hi)
    assert not c.put("power_sum", _key(f), LS(f, [1, 1], 0, 10))
    assert not c.put("power_sum", _key(f), hi)
    assert c.get("power_sum", _key(f), f, 20) == hi
    assert c.put("power_sum", _key(f), LS(f, [1, 1, 1], 0, 30))


def test_corrupt_entry_is_absent(tmp_path, caplog):
    f = fld(3)
    c = PowerSumCache(tmp_path)
    c.put("power_sum", _key(f), LS(f, [1], 0, 10))
    entry = next(p for p in tmp_path.glob("*.json"))
    entry.write_text("{not json")
    assert c.get("power_sum", _key(f), f, 5) is None
    assert "corrupt" in caplog.text


def test_entries_are_readable_json(tmp_path):
    f = fld(2)
    c = PowerSumCache(tmp_path)
    c.put("power_sum", _key(f), LS(f, [1, 1], 0, 8))
    entry = json.loads(next(tmp_path.glob("*.json")).read_text())
    assert json.loads(entry["descriptor"])["key"]["t"] == "1"
    assert not list(tmp_path.glob(".tmp-*"))


def test_power_sum_through_cache(tmp_path):
    f = fld(3)
    c = PowerSumCache(tmp_path)
    cold = power_sum(f, 3, 1, 5, FieldElem(f, 2), 15, cache=c)
    warm = power_sum(f, 3, 1, 5, FieldElem(f, 2), 15, cache=c)
    assert cold == warm and c.hits == 1


def test_concurrent_writers(tmp_path):
    f = fld(3)
    c = PowerSumCache(tmp_path)
    vals = [LS(f, [1, 2, 1], 0, p) for p in range(5, 25)]

    def put(v):
        c.put("power_sum", _key(f), v)

    threads = [threading.Thread(target=put, args=(v,)) for v in vals]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert c.get("power_sum", _key(f), f, 24) == vals[-1]
