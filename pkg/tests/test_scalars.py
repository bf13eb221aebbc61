import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fld
from fflseries import FieldSpec, PadicInt, get_field
from fflseries.errors import FieldMismatchError, FieldZeroDivisionError, PrecisionError
from fflseries.scalars import FieldElem, enumerate_field, field_add, field_inv, field_mul, lucas_binom


def test_f2_one_plus_one():
    f = fld(2)
    assert field_add(FieldElem(f, 1), FieldElem(f, 1)).code == 0


def test_f3_inverse_of_two():
    f = fld(3)
    assert field_inv(FieldElem(f, 2)).code == 2


def test_f4_u_squared():
    f = get_field(FieldSpec.from_q(4, modulus_q=(1, 1, 1)))
    u = FieldElem(f, f.parse("g"))
    assert f.render(field_mul(u, u).code) == "g+1"


def test_inverse_of_zero_raises():
    with pytest.raises(FieldZeroDivisionError):
        field_inv(FieldElem(fld(5), 0))


def test_mismatched_specs_raise():
    with pytest.raises(FieldMismatchError):
        field_add(FieldElem(fld(2), 1), FieldElem(fld(3), 1))


@pytest.mark.parametrize("q,expected", [(2, [0, 1]), (3, [0, 1, 2])])
def test_enumerate_prime_fields(q, expected):
    assert [x.code for x in enumerate_field(FieldSpec.from_q(q))] == expected


def test_enumerate_f4_distinct():
    els = enumerate_field(FieldSpec.from_q(4))
    assert len(els) == 4 and len({x.code for x in els}) == 4


def test_non_prime_p_rejected():
    with pytest.raises(ValueError):
        FieldSpec(p=6)


@pytest.mark.parametrize("q,n", [(2, 1), (3, 1), (4, 1), (5, 1), (2, 2), (3, 2), (8, 1), (9, 1)])
def test_field_axioms_exhaustive(q, n):
    f = fld(q, n)
    els = range(f.order)
    for a in els:
        assert f.add(a, f.neg(a)) == 0
        assert f.mul(a, 1) == a
        if a:
            assert f.mul(a, f.inv(a)) == 1
        for b in els:
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
    # distributivity on a sample
    for a in list(els)[:5]:
        for b in list(els)[:5]:
            for c in list(els)[:5]:
                assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


def test_extension_level_markers():
    f = fld(2, 2)
    assert FieldElem(f, 1).level == "p"
    assert FieldElem(f, 2).level == "E"
    assert f.render(2) == "h"


@given(st.integers(min_value=-(10**30), max_value=10**30), st.sampled_from([2, 3, 5, 7]))
def test_pow_matches_repeated_squaring(e, q):
    f = fld(q)
    for a in range(1, q):
        r = f.pow(a, e)
        assert r == pow(a, e % (q - 1), q)


def test_padic_digits():
    assert PadicInt.exact(3, 5).digit(0) == 2
    assert PadicInt.exact(3, 5).digit(1) == 1
    assert all(PadicInt.exact(2, -1).digit(i) == 1 for i in range(50))
    assert PadicInt.truncated(5, [3, 4]).digit(1) == 4


def test_truncated_digit_out_of_range():
    with pytest.raises(PrecisionError):
        PadicInt.truncated(5, [3, 4]).digit(2)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_lucas_binom_zero(p):
    assert lucas_binom(PadicInt.exact(p, 123), 0) == 1


def test_lucas_binom_minus_one_mod_three():
    y = PadicInt.exact(3, -1)
    for k in range(20):
        assert lucas_binom(y, k) == (-1) ** k % 3


def test_lucas_binom_five_choose_two():
    assert lucas_binom(PadicInt.exact(2, 5), 2) == 0 == math.comb(5, 2) % 2


@settings(max_examples=200)
@given(st.integers(min_value=0, max_value=3000), st.integers(min_value=0, max_value=60), st.sampled_from([2, 3, 5, 7]))
def test_lucas_matches_integer_binomial(y, k, p):
    assert lucas_binom(PadicInt.exact(p, y), k) == math.comb(y, k) % p


def test_lucas_truncated_needs_digits():
    y = PadicInt.truncated(2, [1, 1])
    assert lucas_binom(y, 3) == 1
    with pytest.raises(PrecisionError):
        lucas_binom(y, 4)


def test_padic_arithmetic_truncated():
    a = PadicInt.truncated(3, [2, 1])
    b = PadicInt.exact(3, 4)
    assert (a + b).residue(2) == (5 + 4) % 9
    assert (-PadicInt.exact(3, 7)).value == -7
