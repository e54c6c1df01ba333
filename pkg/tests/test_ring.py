from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kht.ring import QQ, Field, FieldScalar, Monomial, mono_mul, mono_try_divide, parse_field, scalar_op

FIELDS = [QQ, Field(2), Field(3), Field(5), Field(7), Field(101)]
field_st = st.sampled_from(FIELDS)
ints = st.integers(-10**6, 10**6)


@given(field_st, ints, ints, ints)
def test_field_axioms(f, a, b, c):
    a, b, c = f(a), f(b), f(c)
    assert f.add(a, b) == f.add(b, a)
    assert f.mul(a, b) == f.mul(b, a)
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.add(a, f.neg(a)) == f.zero
    assert f.sub(a, b) == f.add(a, f.neg(b))
    if a:
        assert f.mul(a, f.inv(a)) == f.one


@given(field_st, ints, st.integers(1, 10**6))
def test_fraction_coercion(f, n, d):
    if f.p and Fraction(n, d).denominator % f.p == 0:
        with pytest.raises(ZeroDivisionError):
            f(Fraction(n, d))
        return
    assert f.mul(f(Fraction(n, d)), f(d)) == f(n)


def test_parse_field():
    assert parse_field("q") == QQ
    assert parse_field("F7") == Field(7)
    assert parse_field("f2").name == "f2"
    for bad in ("f4", "f1", "f0", "z", "f"):
        with pytest.raises(ValueError):
            parse_field(bad)


def test_zero_inverse():
    for f in FIELDS:
        with pytest.raises(ZeroDivisionError):
            f.inv(f.zero)


def test_to_json_exact():
    assert QQ.to_json(QQ("1/2")) == "1/2"
    assert QQ.to_json(QQ(-3)) == -3
    assert Field(3).to_json(Field(3)("1/2")) == 2


def test_scalars_reject_mixed_fields():
    a = FieldScalar.of(Field(3), 1)
    b = FieldScalar.of(Field(5), 1)
    with pytest.raises(TypeError):
        a + b
    assert scalar_op("mul", a, a).value == 1
    assert scalar_op("inv", FieldScalar.of(Field(3), 2)).value == 2


def test_monomials():
    f = Field(5)
    m = Monomial(FieldScalar.of(f, 2), 3)
    assert m.qdeg == -6
    sq = mono_mul(m, m)
    assert (sq.coeff.value, sq.exp) == (4, 6)
    q = mono_try_divide(sq, m)
    assert (q.coeff.value, q.exp) == (2, 3)
    assert mono_try_divide(m, sq) is None
    with pytest.raises(ValueError):
        mono_mul(Monomial(FieldScalar.of(f, 0), 1), m)
