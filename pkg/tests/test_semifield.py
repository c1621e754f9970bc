from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from skeleta.errors import NotIntegral, TagMismatch
from skeleta.semifield import (SemifieldValue, format_value, inverse, join, neg_inf, parse_value, plus,
                               reduce_to_bool, zero)


def V(tag, x):
    return SemifieldValue(tag, None if x is None else Fraction(x))


def test_join_examples():
    assert join(V("Int", 3), V("Int", 5)) == V("Int", 5)
    assert join(neg_inf("Rat"), V("Rat", Fraction(2, 3))) == V("Rat", Fraction(2, 3))
    assert join(zero("Bool"), zero("Bool")) == zero("Bool")


def test_plus_examples():
    assert plus(neg_inf("Int"), V("Int", 7)) == neg_inf("Int")
    assert plus(V("Rat", Fraction(1, 2)), V("Rat", Fraction(-1, 2))) == zero("Rat")
    assert plus(V("Int", 2), V("Int", 3)) == V("Int", 5)


def test_reduction():
    assert reduce_to_bool(V("Int", -1)) == neg_inf("Bool")
    assert reduce_to_bool(V("Int", 0)) == zero("Bool")
    assert reduce_to_bool(V("Rat", Fraction(-3, 7))) == neg_inf("Bool")
    with pytest.raises(NotIntegral):
        reduce_to_bool(V("Int", 2))


def test_tags_do_not_mix():
    with pytest.raises(TagMismatch):
        join(V("Int", 1), V("Rat", 1))
    with pytest.raises(TagMismatch):
        plus(V("Bool", 0), V("Int", 0))


def test_payload_validation():
    with pytest.raises(ValueError):
        V("Int", Fraction(1, 2))
    with pytest.raises(ValueError):
        V("Bool", 1)
    with pytest.raises(ValueError):
        inverse(neg_inf("Int"))


def test_parse_and_format():
    assert parse_value("-inf", "Int").is_neg_inf
    assert parse_value("-3/4") == V("Rat", Fraction(-3, 4))
    assert format_value(parse_value("5/10")) == "1/2"
    with pytest.raises(ValueError):
        parse_value("abc")


rat = st.one_of(st.none(), st.fractions(max_denominator=12).filter(lambda q: abs(q) < 100))
rats = rat.map(lambda x: SemifieldValue("Rat", x))
integral = st.one_of(st.none(), st.integers(-20, 0)).map(lambda x: SemifieldValue("Int", x))


@given(rats, rats, rats)
def test_semiring_axioms(a, b, c):
    assert join(a, b) == join(b, a)
    assert join(join(a, b), c) == join(a, join(b, c))
    assert join(a, a) == a
    assert join(a, neg_inf("Rat")) == a
    assert plus(a, b) == plus(b, a)
    assert plus(plus(a, b), c) == plus(a, plus(b, c))
    assert plus(a, zero("Rat")) == a
    assert plus(a, neg_inf("Rat")) == neg_inf("Rat")
    assert plus(a, join(b, c)) == join(plus(a, b), plus(a, c))


@given(rats)
def test_inverses(a):
    if not a.is_neg_inf:
        assert plus(a, inverse(a)) == zero("Rat")


@given(integral, integral)
def test_reduction_is_a_homomorphism(a, b):
    assert reduce_to_bool(join(a, b)) == join(reduce_to_bool(a), reduce_to_bool(b))
    assert reduce_to_bool(plus(a, b)) == plus(reduce_to_bool(a), reduce_to_bool(b))
